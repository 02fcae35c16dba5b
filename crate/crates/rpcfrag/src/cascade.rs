//! The two Poissonian constructions of the cascade: a weight tree built from
//! independent Poisson point processes at each node, and nested intervals cut
//! by composed truncated stable subordinators.
//!
//! Both realize the same nested family of laws: at level k the normalized
//! weights (or interval lengths) follow PD(x_k, 0), and the partitions they
//! induce through a shared paint box refine from one level to the next.
//! Truncation below `eps` is the only approximation; every sampled object
//! carries a closed-form or realized bound on the discarded mass.

use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::SetPartition;
use crate::sample::RandomStream;
use crate::scalar::{c, Real};

/// Hard ceiling on atoms per node or per path. Exceeding it means `eps` is
/// too small for the requested domain, which is a configuration problem.
const ATOM_CAP: usize = 1_000_000;

/// Retries of the halve-eps rule before a node is declared unbuildable.
const ZERO_ATOM_RETRIES: usize = 40;

/// Expected mass of the discarded atoms below `eps` of a unit-domain process
/// with intensity x r^{-1-x} dr: the integral x eps^{1-x}/(1-x).
fn small_jump_mass<F: Real>(x: F, eps: F) -> F {
    x * eps.powf(F::one() - x) / (F::one() - x)
}

fn check_stable_index<F: Real>(x: F) -> Result<()> {
    if !(x > F::zero() && x < F::one()) {
        return Err(Error::Domain(format!("stable index {x} outside (0,1)")));
    }
    Ok(())
}

/// Atom sizes of a Poisson process with intensity x r^{-1-x} dr per unit of
/// domain, truncated to sizes at least `eps`, sorted decreasing. The count is
/// Poisson(domain_length * eps^{-x}) and the sizes are iid Pareto with tail
/// P(size > r) = (r/eps)^{-x}.
pub fn sample_poisson_atoms<F: Real>(
    x: F,
    eps: F,
    domain_length: F,
    rng: &mut RandomStream,
) -> Result<Vec<F>> {
    check_stable_index(x)?;
    if !(eps > F::zero()) {
        return Err(Error::Domain(format!(
            "truncation {eps} must be positive; the total intensity below any \
             level is infinite"
        )));
    }
    if !(domain_length >= F::zero()) || !domain_length.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "domain length {domain_length} must be finite and nonnegative"
        )));
    }
    let mean = (domain_length * eps.powf(-x))
        .to_f64()
        .filter(|m| m.is_finite())
        .ok_or_else(|| {
            Error::Config("expected atom count overflows; increase eps".into())
        })?;
    if mean > ATOM_CAP as f64 {
        return Err(Error::Config(format!(
            "expected atom count {mean:.3e} exceeds the cap of {ATOM_CAP}; increase eps"
        )));
    }
    let count = if mean > 0.0 {
        Poisson::new(mean)
            .expect("positive finite mean")
            .sample(rng) as usize
    } else {
        0
    };
    if count > ATOM_CAP {
        return Err(Error::Config(format!(
            "realized atom count {count} exceeds the cap of {ATOM_CAP}; increase eps"
        )));
    }
    let inv_x = -x.recip();
    let mut sizes: Vec<F> = (0..count)
        .map(|_| eps * F::open01(rng).powf(inv_x))
        .collect();
    sizes.sort_by(|a, b| b.partial_cmp(a).expect("finite sizes"));
    Ok(sizes)
}

/// A truncated stable subordinator restricted to a finite domain: pure jump,
/// zero drift, all jumps at least `eps`. Locations are iid uniform over the
/// domain given the count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubordinatorPath<F> {
    index: F,
    domain_length: F,
    /// (location, size), sorted by location.
    jumps: Vec<(F, F)>,
    eps: F,
    /// Expected mass of the jumps below eps that the truncation discarded.
    small_jump_mass: F,
}

impl<F: Real> SubordinatorPath<F> {
    /// Samples a path of the given stable index over [0, domain_length].
    pub fn sample(
        index: F,
        domain_length: F,
        eps: F,
        rng: &mut RandomStream,
    ) -> Result<Self> {
        let sizes = sample_poisson_atoms(index, eps, domain_length, rng)?;
        let mut jumps: Vec<(F, F)> = sizes
            .into_iter()
            .map(|s| (F::open01(rng) * domain_length, s))
            .collect();
        jumps.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite locations"));
        Ok(SubordinatorPath {
            index,
            domain_length,
            jumps,
            eps,
            small_jump_mass: domain_length * small_jump_mass(index, eps),
        })
    }

    /// Assembles a path from explicit jumps, for composition plumbing.
    pub fn from_jumps(
        index: F,
        domain_length: F,
        mut jumps: Vec<(F, F)>,
        eps: F,
        small_jump_mass: F,
    ) -> Result<Self> {
        if jumps
            .iter()
            .any(|&(b, s)| !(b >= F::zero() && b <= domain_length) || !(s > F::zero()))
        {
            return Err(Error::InvalidArgument(
                "jump locations must lie in the domain and sizes must be positive".into(),
            ));
        }
        jumps.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite locations"));
        Ok(SubordinatorPath {
            index,
            domain_length,
            jumps,
            eps,
            small_jump_mass,
        })
    }

    pub fn index(&self) -> F {
        self.index
    }

    pub fn domain_length(&self) -> F {
        self.domain_length
    }

    pub fn jumps(&self) -> &[(F, F)] {
        &self.jumps
    }

    pub fn eps(&self) -> F {
        self.eps
    }

    pub fn small_jump_mass(&self) -> F {
        self.small_jump_mass
    }

    /// Total size of all jumps: the length of the path's range.
    pub fn total_range(&self) -> F {
        self.jumps.iter().map(|&(_, s)| s).sum()
    }
}

/// Functional composition outer(inner(.)). The inner path's jump of size xi
/// starting at cumulative height h sweeps the window [h, h+xi) of the outer
/// domain; the outer jumps inside that window aggregate into one composed
/// jump at the inner jump's location. Outer jumps in no window are skipped,
/// exactly as a pure-jump inner path skips them.
pub fn compose_subordinators<F: Real>(
    outer: &SubordinatorPath<F>,
    inner: &SubordinatorPath<F>,
) -> Result<SubordinatorPath<F>> {
    let reach = inner.total_range();
    if reach > outer.domain_length * (F::one() + c(1e-12)) {
        return Err(Error::InvalidArgument(format!(
            "inner path reaches {reach} but the outer domain is only {}",
            outer.domain_length
        )));
    }
    let mut composed = Vec::new();
    let mut min_size = F::infinity();
    let mut oi = 0usize;
    let mut height = F::zero();
    for &(b, xi) in inner.jumps() {
        // Outer jumps with location in [height, height + xi). Jumps below
        // the window sit in a gap the inner path skips over.
        let mut agg = F::zero();
        while let Some(&(ob, os)) = outer.jumps().get(oi) {
            if ob >= height + xi {
                break;
            }
            if ob >= height {
                agg = agg + os;
            }
            oi += 1;
        }
        if agg > F::zero() {
            if agg < min_size {
                min_size = agg;
            }
            composed.push((b, agg));
        }
        height = height + xi;
    }
    let slope = if outer.domain_length > F::zero() {
        outer.total_range() / outer.domain_length
    } else {
        F::zero()
    };
    let eps = if min_size.is_finite() {
        min_size
    } else {
        outer.eps()
    };
    SubordinatorPath::from_jumps(
        outer.index() * inner.index(),
        inner.domain_length(),
        composed,
        eps,
        outer.small_jump_mass() + inner.small_jump_mass() * slope,
    )
}

/// One node of a cascade tree: its index tuple (one rank per level, ranks
/// ordered by decreasing atom size within the parent) and its normalized
/// weight, which for interior nodes is the exact sum over stored children.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CascadeNode<F> {
    pub indices: Vec<u32>,
    pub weight: F,
}

/// The multiplicative Poisson cascade over times x_1 < ... < x_p: each node
/// at depth k-1 owns an independent unit-domain Poisson process of intensity
/// x_k r^{-1-x_k} dr, path products are normalized by the total leaf mass,
/// and interior weights sum over children, so every level sums to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CascadeTree<F> {
    indices: Vec<F>,
    eps: F,
    truncation_bound: F,
    levels: Vec<Vec<CascadeNode<F>>>,
}

impl<F: Real> CascadeTree<F> {
    pub fn times(&self) -> &[F] {
        &self.indices
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn eps(&self) -> F {
        self.eps
    }

    /// First-order estimate of the normalized leaf mass lost to truncation.
    pub fn truncation_bound(&self) -> F {
        self.truncation_bound
    }

    /// Nodes of level k (1-based), in lexicographic tuple order.
    pub fn level_nodes(&self, k: usize) -> &[CascadeNode<F>] {
        &self.levels[k - 1]
    }

    pub fn level_weights(&self, k: usize) -> Vec<F> {
        self.levels[k - 1].iter().map(|n| n.weight).collect()
    }

    /// Largest violation of parent weight = sum of child weights.
    pub fn additivity_defect(&self) -> F {
        let mut worst = F::zero();
        for k in 1..self.levels.len() {
            let mut child_sums = vec![F::zero(); self.levels[k - 1].len()];
            let mut parent = 0usize;
            for child in &self.levels[k] {
                while self.levels[k - 1][parent].indices[..] != child.indices[..k] {
                    parent += 1;
                }
                child_sums[parent] = child_sums[parent] + child.weight;
            }
            for (node, sum) in self.levels[k - 1].iter().zip(child_sums) {
                let defect = (node.weight - sum).abs();
                if defect > worst {
                    worst = defect;
                }
            }
        }
        worst
    }

    /// Paint-box partitions of [n], one per level, from a single shared set
    /// of uniforms: element i sits in the level-k block of the level-k
    /// ancestor of the leaf its uniform lands in. Later levels refine
    /// earlier ones by construction.
    pub fn induce_partitions(&self, n: usize, rng: &mut RandomStream) -> Result<Vec<SetPartition>> {
        if n < 1 {
            return Err(Error::InvalidArgument("need at least one element".into()));
        }
        let leaves = self.levels.last().expect("at least one level");
        let mut cum = Vec::with_capacity(leaves.len());
        let mut acc = F::zero();
        for leaf in leaves {
            acc = acc + leaf.weight;
            cum.push(acc);
        }
        let total = acc;
        let leaf_of: Vec<usize> = (0..n)
            .map(|_| {
                let u = F::open01(rng) * total;
                cum.partition_point(|&edge| edge <= u).min(leaves.len() - 1)
            })
            .collect();
        let mut out = Vec::with_capacity(self.levels.len());
        for k in 1..=self.levels.len() {
            // Two leaves share a level-k block iff their tuples agree on the
            // first k ranks; label by the ancestor's position at level k.
            let mut labels = Vec::with_capacity(n);
            for &leaf in &leaf_of {
                let prefix = &leaves[leaf].indices[..k];
                let pos = self.levels[k - 1]
                    .binary_search_by(|node| node.indices[..].cmp(prefix))
                    .expect("ancestor exists");
                labels.push(pos);
            }
            out.push(SetPartition::from_assignments(&labels)?);
        }
        Ok(out)
    }
}

/// Builds a cascade tree over strictly increasing times in (0,1). Each node
/// draws its children from its own unit-domain truncated Poisson process; a
/// node that draws no atoms retries with halved eps a bounded number of
/// times. Leaf path-products are normalized by their total; interior weights
/// are exact child sums.
pub fn build_cascade<F: Real>(
    xs: &[F],
    eps: F,
    rng: &mut RandomStream,
) -> Result<CascadeTree<F>> {
    if xs.is_empty() {
        return Err(Error::InvalidArgument("need at least one level".into()));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "level times must be strictly increasing".into(),
        ));
    }
    for &x in xs {
        check_stable_index(x)?;
        if !(eps > F::zero() && eps < F::one()) {
            return Err(Error::Domain(format!("truncation {eps} outside (0,1)")));
        }
    }
    let p = xs.len();
    // Unnormalized per level: (tuple, path product); plus per-parent raw atom
    // sums and the eps each node ended up using, for the truncation bound.
    let mut tuples: Vec<Vec<Vec<u32>>> = Vec::with_capacity(p);
    let mut products: Vec<Vec<F>> = Vec::with_capacity(p);
    let mut parent_raw_sum: Vec<Vec<F>> = Vec::with_capacity(p);
    let mut parent_eps: Vec<Vec<F>> = Vec::with_capacity(p);
    for (level, &x) in xs.iter().enumerate() {
        let parents = if level == 0 {
            1
        } else {
            tuples[level - 1].len()
        };
        let mut level_tuples = Vec::new();
        let mut level_products = Vec::new();
        let mut raw_sums = Vec::with_capacity(parents);
        let mut used_eps = Vec::with_capacity(parents);
        for parent in 0..parents {
            let mut node_eps = eps;
            let mut atoms = sample_poisson_atoms(x, node_eps, F::one(), rng)?;
            let mut retries = 0;
            while atoms.is_empty() {
                retries += 1;
                if retries > ZERO_ATOM_RETRIES {
                    return Err(Error::Numeric(format!(
                        "node at level {} drew no atoms after {ZERO_ATOM_RETRIES} \
                         eps halvings",
                        level + 1
                    )));
                }
                node_eps = node_eps / c(2.0);
                atoms = sample_poisson_atoms(x, node_eps, F::one(), rng)?;
            }
            raw_sums.push(atoms.iter().copied().sum::<F>());
            used_eps.push(node_eps);
            let (parent_tuple, parent_product): (&[u32], F) = if level == 0 {
                (&[], F::one())
            } else {
                (
                    &tuples[level - 1][parent],
                    products[level - 1][parent],
                )
            };
            for (rank, &eta) in atoms.iter().enumerate() {
                let mut tuple = Vec::with_capacity(level + 1);
                tuple.extend_from_slice(parent_tuple);
                tuple.push(rank as u32);
                level_tuples.push(tuple);
                level_products.push(parent_product * eta);
            }
        }
        tuples.push(level_tuples);
        products.push(level_products);
        parent_raw_sum.push(raw_sums);
        parent_eps.push(used_eps);
    }
    // Normalize leaves by the total mass C, then sum upward.
    let total: F = products[p - 1].iter().copied().sum();
    let mut weights: Vec<Vec<F>> = vec![Vec::new(); p];
    weights[p - 1] = products[p - 1].iter().map(|&w| w / total).collect();
    for k in (0..p - 1).rev() {
        let mut sums = vec![F::zero(); tuples[k].len()];
        let mut parent = 0usize;
        for (child_tuple, &w) in tuples[k + 1].iter().zip(&weights[k + 1]) {
            while tuples[k][parent][..] != child_tuple[..k + 1] {
                parent += 1;
            }
            sums[parent] = sums[parent] + w;
        }
        weights[k] = sums;
    }
    // First-order bound on lost normalized mass: each node's truncation
    // removes an expected small_jump_mass(x, eps) of raw child mass out of
    // the raw sum it kept, scaled by the node's own normalized weight.
    let mut bound = F::zero();
    for (level, &x) in xs.iter().enumerate() {
        for (parent, (&raw, &node_eps)) in parent_raw_sum[level]
            .iter()
            .zip(&parent_eps[level])
            .enumerate()
        {
            let node_weight = if level == 0 {
                F::one()
            } else {
                weights[level - 1][parent]
            };
            bound = bound + node_weight * small_jump_mass(x, node_eps) / raw;
        }
    }
    let levels = tuples
        .into_iter()
        .zip(weights)
        .map(|(ts, ws)| {
            ts.into_iter()
                .zip(ws)
                .map(|(indices, weight)| CascadeNode { indices, weight })
                .collect()
        })
        .collect();
    Ok(CascadeTree {
        indices: xs.to_vec(),
        eps,
        truncation_bound: bound,
        levels,
    })
}

/// Nested interval families over a common final segment, one family per
/// level, cut by the composed subordinator construction: per-level stable
/// indices are the ratios x_k/x_{k+1} (and x_p at the last level), so the
/// composite from level k down has index x_k.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NestedIntervals<F> {
    times: Vec<F>,
    total_length: F,
    /// Per level: (start, length) in the final segment, sorted by start.
    levels: Vec<Vec<(F, F)>>,
    /// Rough estimate of final-space mass dropped by truncation, combining
    /// per-stage small-jump bounds and unresolved nodes, mapped through
    /// realized slopes.
    dropped_mass: F,
}

impl<F: Real> NestedIntervals<F> {
    pub fn times(&self) -> &[F] {
        &self.times
    }

    pub fn total_length(&self) -> F {
        self.total_length
    }

    pub fn level(&self, k: usize) -> &[(F, F)] {
        &self.levels[k - 1]
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn dropped_mass(&self) -> F {
        self.dropped_mass
    }

    /// Paint-box partitions per level from one shared set of uniforms.
    /// Uniforms landing outside every interval of a level become singletons.
    pub fn induce_partitions(&self, n: usize, rng: &mut RandomStream) -> Result<Vec<SetPartition>> {
        if n < 1 {
            return Err(Error::InvalidArgument("need at least one element".into()));
        }
        let us: Vec<F> = (0..n).map(|_| F::open01(rng) * self.total_length).collect();
        (1..=self.levels.len())
            .map(|k| partition_at(self.level(k), &us))
            .collect()
    }
}

/// Stage node of the in-progress nested construction.
struct StageNode<F> {
    parent: usize,
    position: F,
    length: F,
}

/// Cuts nested intervals for strictly increasing times in (0,1) over a
/// domain of length `a`. Stage k draws, inside every stage-(k-1) interval of
/// length L, an independent truncated Poisson family of index x_k/x_{k+1}
/// (x_p at the last stage) over domain L; a level's final intervals are laid
/// out as the exact union of their surviving descendants' leaf lengths.
pub fn nested_intervals<F: Real>(
    ts: &[F],
    a: F,
    eps: F,
    rng: &mut RandomStream,
) -> Result<NestedIntervals<F>> {
    if ts.is_empty() {
        return Err(Error::InvalidArgument("need at least one level".into()));
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "level times must be strictly increasing".into(),
        ));
    }
    for &t in ts {
        check_stable_index(t)?;
    }
    if !(a > F::zero()) || !a.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "domain length {a} must be positive and finite"
        )));
    }
    let p = ts.len();
    let mut stages: Vec<Vec<StageNode<F>>> = Vec::with_capacity(p);
    let mut stage_dropped: Vec<F> = Vec::with_capacity(p);
    for k in 0..p {
        let beta = if k + 1 < p { ts[k] / ts[k + 1] } else { ts[k] };
        let parent_lengths: Vec<F> = if k == 0 {
            vec![a]
        } else {
            stages[k - 1].iter().map(|n| n.length).collect()
        };
        let mut nodes = Vec::new();
        let mut dropped = F::zero();
        for (parent, &plen) in parent_lengths.iter().enumerate() {
            dropped = dropped + plen * small_jump_mass(beta, eps);
            let atoms = sample_poisson_atoms(beta, eps, plen, rng)?;
            let mut children: Vec<StageNode<F>> = atoms
                .into_iter()
                .map(|length| StageNode {
                    parent,
                    position: F::open01(rng) * plen,
                    length,
                })
                .collect();
            children.sort_by(|x, y| x.position.partial_cmp(&y.position).expect("finite"));
            nodes.extend(children);
        }
        stages.push(nodes);
        stage_dropped.push(dropped);
    }
    // Final length of a stage node = sum of its leaf descendants; childless
    // interior nodes resolve to zero and are dropped from their level.
    let mut final_lengths: Vec<Vec<F>> = vec![Vec::new(); p];
    final_lengths[p - 1] = stages[p - 1].iter().map(|n| n.length).collect();
    for k in (0..p - 1).rev() {
        let mut sums = vec![F::zero(); stages[k].len()];
        for (child, fl) in stages[k + 1].iter().zip(&final_lengths[k + 1]) {
            sums[child.parent] = sums[child.parent] + *fl;
        }
        final_lengths[k] = sums;
    }
    // Unresolved stage mass, mapped to final space by realized slopes.
    let mut dropped_final = F::zero();
    for k in 0..p {
        let stage_total: F = stages[k].iter().map(|n| n.length).sum();
        let resolved: F = final_lengths[k].iter().copied().sum();
        let slope = if stage_total > F::zero() {
            resolved / stage_total
        } else {
            F::zero()
        };
        let unresolved = stage_total - resolved;
        dropped_final = dropped_final + slope * (stage_dropped[k] + unresolved.max(F::zero()));
    }
    // Lay leaves out left to right in depth-first stage order and read off
    // every level's (start, length) spans.
    let mut levels: Vec<Vec<(F, F)>> = vec![Vec::new(); p];
    let mut cursor = F::zero();
    // children[k][i] = indices of stage k+1 nodes under stage-k node i.
    let mut children: Vec<Vec<Vec<usize>>> = Vec::with_capacity(p);
    for k in 0..p - 1 {
        let mut per_parent: Vec<Vec<usize>> = vec![Vec::new(); stages[k].len()];
        for (idx, child) in stages[k + 1].iter().enumerate() {
            per_parent[child.parent].push(idx);
        }
        children.push(per_parent);
    }
    // An interior interval's length is the exact span its children cover,
    // so containment and tiling hold without roundoff slack.
    enum Step<F> {
        Enter(usize, usize),
        Finalize(usize, F),
    }
    let mut stack: Vec<Step<F>> = (0..stages[0].len())
        .rev()
        .map(|r| Step::Enter(0, r))
        .collect();
    while let Some(step) = stack.pop() {
        match step {
            Step::Enter(k, idx) => {
                if final_lengths[k][idx] <= F::zero() {
                    continue;
                }
                if k + 1 == p {
                    let len = stages[k][idx].length;
                    levels[k].push((cursor, len));
                    cursor = cursor + len;
                } else {
                    stack.push(Step::Finalize(k, cursor));
                    for &child in children[k][idx].iter().rev() {
                        stack.push(Step::Enter(k + 1, child));
                    }
                }
            }
            Step::Finalize(k, start) => levels[k].push((start, cursor - start)),
        }
    }
    let total_length = cursor;
    Ok(NestedIntervals {
        times: ts.to_vec(),
        total_length,
        levels,
        dropped_mass: dropped_final,
    })
}

fn partition_at<F: Real>(intervals: &[(F, F)], us: &[F]) -> Result<SetPartition> {
    let n = us.len();
    let mut labels = Vec::with_capacity(n);
    for (i, &u) in us.iter().enumerate() {
        let j = intervals.partition_point(|&(start, _)| start <= u);
        let hit = j
            .checked_sub(1)
            .filter(|&j| u < intervals[j].0 + intervals[j].1);
        match hit {
            Some(j) => labels.push(j),
            None => labels.push(intervals.len() + 1 + i),
        }
    }
    SetPartition::from_assignments(&labels)
}

/// Paint-box partition of [n] from a family of disjoint intervals inside
/// [0, total]: elements whose uniforms land in the same interval share a
/// block, and uniforms in the gaps become singletons.
pub fn partition_from_intervals<F: Real>(
    intervals: &[(F, F)],
    total: F,
    n: usize,
    rng: &mut RandomStream,
) -> Result<SetPartition> {
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one element".into()));
    }
    if !(total > F::zero()) || !total.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "total length {total} must be positive and finite"
        )));
    }
    let mut sorted = intervals.to_vec();
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite starts"));
    let slack = total * c(1e-9);
    let mut reach = F::zero();
    for &(start, len) in &sorted {
        if !(start >= F::zero() && len > F::zero()) || start + len > total + slack {
            return Err(Error::InvalidArgument(
                "intervals must lie inside [0, total] with positive length".into(),
            ));
        }
        if start < reach - slack {
            return Err(Error::InvalidArgument("intervals must be disjoint".into()));
        }
        reach = start + len;
    }
    let us: Vec<F> = (0..n).map(|_| F::open01(rng) * total).collect();
    partition_at(&sorted, &us)
}
