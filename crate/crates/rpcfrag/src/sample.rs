//! Exact samplers for the Poisson-Dirichlet family: stick breaking, ranked
//! mass vectors, Chinese-restaurant partitions, the paint box, size-biased
//! permutation, and the size-biased dislocation draw conditioned to keep its
//! leading mass below a cap.
//!
//! Every public sampler draws from a [`RandomStream`], a counter-mode
//! generator addressed by (seed, stream id). Replicas own disjoint stream
//! ids, which makes parallel Monte Carlo reproducible independent of
//! scheduling.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laws::PdParams;
use crate::mass::MassPartition;
use crate::numeric::{bisect_increasing, KahanSum};
use crate::partition::SetPartition;
use crate::scalar::{c, Real};

/// Default truncation tolerance for stick breaking: small enough that the
/// discarded tail mass stays below Monte Carlo noise at 1e5 replicas.
pub const DEFAULT_TRUNC_TOL: f64 = 1e-6;

/// Ceiling on emitted sticks. The stick count to reach tolerance eps grows
/// like eps^{-alpha/(1-alpha)}, so tight tolerances at large alpha are
/// refused rather than ground through.
const MAX_STICKS: usize = 20_000_000;

/// Deterministic random source: a ChaCha8 generator keyed by a seed and a
/// stream id. Identical (seed, stream_id) reproduce the identical integer
/// output sequence on every platform; distinct stream ids select disjoint
/// counter streams of the same key.
#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RandomStream {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

/// Masses in size-biased order (the order in which stick breaking emits
/// them), together with an upper bound on the truncated tail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawSticks<F>",
    into = "RawSticks<F>",
    bound(
        serialize = "F: Real + Serialize",
        deserialize = "F: Real + Deserialize<'de>"
    )
)]
pub struct SizeBiasedSequence<F> {
    sticks: Vec<F>,
    dust_bound: F,
}

#[derive(Serialize, Deserialize)]
struct RawSticks<F> {
    sticks: Vec<F>,
    dust_bound: F,
}

impl<F: Real> TryFrom<RawSticks<F>> for SizeBiasedSequence<F> {
    type Error = Error;
    fn try_from(raw: RawSticks<F>) -> Result<Self> {
        SizeBiasedSequence::new(raw.sticks, raw.dust_bound)
    }
}

impl<F: Real> From<SizeBiasedSequence<F>> for RawSticks<F> {
    fn from(s: SizeBiasedSequence<F>) -> Self {
        RawSticks {
            sticks: s.sticks,
            dust_bound: s.dust_bound,
        }
    }
}

impl<F: Real> SizeBiasedSequence<F> {
    /// Entries must lie in (0, 1]; the total including dust may not exceed
    /// 1 beyond rounding slack. Entries need not be monotone.
    pub fn new(sticks: Vec<F>, dust_bound: F) -> Result<Self> {
        if sticks.iter().any(|&s| !(s > F::zero() && s <= F::one())) {
            return Err(Error::InvalidArgument(
                "size-biased entries must lie in (0, 1]".into(),
            ));
        }
        if !(dust_bound >= F::zero()) || !dust_bound.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "dust bound {dust_bound} must be finite and nonnegative"
            )));
        }
        let total = sticks.iter().copied().sum::<F>() + dust_bound;
        if total > F::one() + c(1e-9) {
            return Err(Error::InvalidArgument(format!(
                "sticks plus dust sum to {total} > 1"
            )));
        }
        Ok(SizeBiasedSequence { sticks, dust_bound })
    }

    pub fn sticks(&self) -> &[F] {
        &self.sticks
    }

    pub fn dust_bound(&self) -> F {
        self.dust_bound
    }

    /// Sum of the enumerated sticks, dust excluded.
    pub fn total(&self) -> F {
        self.sticks.iter().copied().sum()
    }

    /// Whether sticks plus dust account for full mass within `tol`.
    pub fn is_proper(&self, tol: F) -> bool {
        ((self.total() + self.dust_bound) - F::one()).abs() <= tol
    }

    /// Decreasing rearrangement; the dust bound carries over.
    pub fn to_ranked(&self) -> Result<MassPartition<F>> {
        MassPartition::from_unsorted(self.sticks.clone(), self.dust_bound)
    }
}

/// Beta(a, b) draw built from two gamma variates. Retries the null event of
/// a boundary value so the result is always interior.
pub(crate) fn beta_draw<F: Real, R: Rng + ?Sized>(rng: &mut R, a: F, b: F) -> F {
    debug_assert!(a > F::zero() && b > F::zero());
    loop {
        let x = F::gamma(rng, a);
        let y = F::gamma(rng, b);
        let v = x / (x + y);
        if v > F::zero() && v < F::one() {
            return v;
        }
    }
}

/// Stick-breaking (GEM) draw from the proper (α, θ) family: the n-th stick
/// fraction is Beta(1−α, θ+nα), and emitted masses are the products
/// f̂_n = (1−Y₁)⋯(1−Y_{n−1})Y_n in size-biased order. Stops once the
/// remaining mass drops below `stop_tol`; the remainder becomes the dust
/// bound.
pub fn sample_gem<F: Real>(
    p: &PdParams<F>,
    stop_tol: F,
    rng: &mut RandomStream,
) -> Result<SizeBiasedSequence<F>> {
    require_proper_for_sampling(p)?;
    if !(stop_tol > F::zero() && stop_tol < F::one()) {
        return Err(Error::InvalidArgument(format!(
            "stop tolerance {stop_tol} outside (0,1)"
        )));
    }
    let (alpha, theta) = (p.alpha(), p.theta());
    let mut sticks = Vec::new();
    let mut remaining = F::one();
    let mut n = F::zero();
    while remaining >= stop_tol {
        if sticks.len() >= MAX_STICKS {
            return Err(Error::Numeric(format!(
                "stick breaking at (alpha, theta) = ({alpha}, {theta}) did not reach \
                 tolerance {stop_tol} within {MAX_STICKS} sticks"
            )));
        }
        n = n + F::one();
        let y = beta_draw(rng, F::one() - alpha, theta + n * alpha);
        sticks.push(remaining * y);
        remaining = remaining * (F::one() - y);
    }
    SizeBiasedSequence::new(sticks, remaining)
}

/// Ranked PD(α, θ) draw: a GEM draw rearranged decreasingly, truncated so
/// the unseen tail is below `trunc_tol`.
pub fn sample_pd_ranked<F: Real>(
    p: &PdParams<F>,
    trunc_tol: F,
    rng: &mut RandomStream,
) -> Result<MassPartition<F>> {
    sample_gem(p, trunc_tol, rng)?.to_ranked()
}

/// Chinese-restaurant draw of an n-element partition with EPPF p_{α,θ}:
/// element m+1 joins a block of size n_i with probability (n_i−α)/(m+θ) and
/// opens a new block with probability (θ+kα)/(m+θ).
///
/// For θ ≥ 0 each step runs in O(1): a uniformly chosen seated element
/// proposes its block, which is accepted with probability (n_i−α)/n_i, and
/// both the rejection and the θ-slice open a new block. For θ < 0 the step
/// falls back to a linear scan over blocks.
pub fn sample_crp<F: Real>(
    p: &PdParams<F>,
    n: usize,
    rng: &mut RandomStream,
) -> Result<SetPartition> {
    require_proper_for_sampling(p)?;
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one element".into()));
    }
    let (alpha, theta) = (p.alpha(), p.theta());
    let mut labels = vec![0usize; n];
    let mut block_sizes: Vec<usize> = vec![1];
    // Block index of each seated element, for the O(1) proposal step.
    let mut seat_block: Vec<usize> = vec![0];
    for m in 1..n {
        let fm = F::from_usize(m).expect("element count");
        let k = block_sizes.len();
        let new_block = if theta >= F::zero() {
            let v = F::open01(rng) * (fm + theta);
            if v < fm {
                let seat = v.to_usize().expect("seat index in range").min(m - 1);
                let b = seat_block[seat];
                let size = F::from_usize(block_sizes[b]).expect("block size");
                // Accept the proposed block w.p. (size−α)/size; remainder
                // folds into the new-block mass, totalling (θ+kα)/(m+θ).
                if F::open01(rng) * size < size - alpha {
                    Some(b)
                } else {
                    None
                }
            } else {
                None
            }
        } else {
            let mut v = F::open01(rng) * (fm + theta);
            let mut chosen = None;
            for (b, &size) in block_sizes.iter().enumerate() {
                let w = F::from_usize(size).expect("block size") - alpha;
                if v < w {
                    chosen = Some(b);
                    break;
                }
                v = v - w;
            }
            chosen
        };
        let b = match new_block {
            Some(b) => {
                block_sizes[b] += 1;
                b
            }
            None => {
                block_sizes.push(1);
                k
            }
        };
        labels[m] = b;
        seat_block.push(b);
    }
    SetPartition::from_assignments(&labels)
}

/// Paint-box partition of [n] induced by a mass vector: elements whose
/// uniforms land in the same mass interval share a block, and elements
/// landing in the leftover dust become singletons.
pub fn paint_box<F: Real>(
    s: &MassPartition<F>,
    n: usize,
    rng: &mut RandomStream,
) -> Result<SetPartition> {
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one element".into()));
    }
    let mut cum = Vec::with_capacity(s.len());
    let mut acc = KahanSum::new();
    for &m in s.masses() {
        acc.add(m);
        cum.push(acc.value());
    }
    let total = acc.value();
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let u = F::open01(rng);
        if u < total {
            let j = cum.partition_point(|&edge| edge <= u);
            labels.push(j);
        } else {
            // Dust: a label no interval can produce, unique per element.
            labels.push(s.len() + 1 + i);
        }
    }
    SetPartition::from_assignments(&labels)
}

/// Size-biased permutation of the enumerated masses: sampling without
/// replacement with probability proportional to mass. Realized by sorting
/// exponential arrival times E_i / s_i, which is equivalent to the
/// sequential renormalized draw. Zero masses never arrive and are dropped;
/// the dust bound carries over unchanged.
pub fn size_biased_permutation<F: Real>(
    s: &MassPartition<F>,
    rng: &mut RandomStream,
) -> Result<SizeBiasedSequence<F>> {
    if !(s.total() > F::zero()) {
        return Err(Error::Domain(
            "size-biased permutation needs positive total mass".into(),
        ));
    }
    let mut keyed: Vec<(F, F)> = s
        .masses()
        .iter()
        .filter(|&&m| m > F::zero())
        .map(|&m| (F::exp1(rng) / m, m))
        .collect();
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite keys"));
    SizeBiasedSequence::new(keyed.into_iter().map(|(_, m)| m).collect(), s.dust_bound())
}

/// Unnormalized first-coordinate CDF of the size-biased dislocation draw:
/// G_t(x) = ∫₀ˣ y^{−t} (1−y)^{−1} dy, evaluated by series. Both endpoint
/// singularities are integrable; the split at 1/2 keeps either expansion
/// geometric.
fn nu_cdf_unnorm<F: Real>(t: F, x: F) -> F {
    if x <= F::zero() {
        return F::zero();
    }
    let half = c::<F>(0.5);
    let tiny = c::<F>(1e-17);
    // ∫₀^w y^{−t}(1−y)^{−1} dy = Σ_{j≥0} w^{j+1−t}/(j+1−t) for w ≤ 1/2.
    let series_low = |w: F| {
        let mut acc = KahanSum::new();
        let mut pw = w.powf(F::one() - t);
        let mut j = F::zero();
        loop {
            let term = pw / (j + F::one() - t);
            acc.add(term);
            if term < tiny * acc.value() {
                return acc.value();
            }
            pw = pw * w;
            j = j + F::one();
        }
    };
    if x <= half {
        return series_low(x);
    }
    // Above 1/2 expand y^{−t} around y = 1: with q = 1−y,
    // ∫ = ln(q₀/q) + Σ_{j≥1} ([t]_j/j!) (q₀^j − q^j)/j, q₀ = 1/2.
    let q = F::one() - x;
    let mut acc = KahanSum::new();
    acc.add(series_low(half));
    acc.add((half / q).ln());
    let mut coef = F::one();
    let mut p_half = F::one();
    let mut p_q = F::one();
    let mut j = F::zero();
    loop {
        j = j + F::one();
        coef = coef * (t + j - F::one()) / j;
        p_half = p_half * half;
        p_q = p_q * q;
        let term = coef * (p_half - p_q) / j;
        acc.add(term);
        if coef * p_half / j < tiny * acc.value().abs().max(F::one()) {
            return acc.value();
        }
    }
}

/// Total mass the dislocation measure puts on sequences with leading entry
/// at most `cap`: ∫₀^cap y^{−t}(1−y)^{−1} dy. Finite for cap < 1, divergent
/// at cap → 1.
pub fn nu_restricted_mass<F: Real>(t: F, cap: F) -> Result<F> {
    check_nu_domain(t, cap)?;
    Ok(nu_cdf_unnorm(t, cap))
}

/// Size-biased draw from the dislocation measure at time t, conditioned on
/// the leading (size-biased) entry staying at or below `cap`. The first
/// coordinate has density y^{−t}(1−y)^{−1}/G_t(cap) on (0, cap], inverted by
/// bisection to 1e-9 on the CDF scale; conditionally on it the rescaled
/// remainder follows PD(t, 0) and is stick-broken at the default tolerance.
pub fn sample_nu_sizebiased<F: Real>(
    t: F,
    cap: F,
    rng: &mut RandomStream,
) -> Result<SizeBiasedSequence<F>> {
    let x = nu_first_coordinate(t, cap, rng)?;
    let inner = sample_gem(&PdParams::new(t, F::zero())?, c(DEFAULT_TRUNC_TOL), rng)?;
    let rest = F::one() - x;
    let mut sticks = Vec::with_capacity(1 + inner.sticks().len());
    sticks.push(x);
    sticks.extend(inner.sticks().iter().map(|&s| rest * s));
    SizeBiasedSequence::new(sticks, rest * inner.dust_bound())
}

/// Inverts the restricted first-coordinate CDF at a uniform draw. Shared by
/// the public sampler and the hazard estimator, which grows its own sticks.
pub(crate) fn nu_first_coordinate<F: Real>(
    t: F,
    cap: F,
    rng: &mut RandomStream,
) -> Result<F> {
    check_nu_domain(t, cap)?;
    let mass = nu_cdf_unnorm(t, cap);
    let target = F::open01(rng) * mass;
    bisect_increasing(
        |y| nu_cdf_unnorm(t, y),
        target,
        F::zero(),
        cap,
        c(1e-16),
        c(1e-9),
    )
}

fn check_nu_domain<F: Real>(t: F, cap: F) -> Result<()> {
    if !(t > F::zero() && t < F::one()) {
        return Err(Error::Domain(format!("time {t} outside (0,1)")));
    }
    if !(cap > F::zero() && cap < F::one()) {
        return Err(Error::Domain(format!(
            "cap {cap} outside (0,1); the measure has infinite mass at cap = 1"
        )));
    }
    Ok(())
}

fn require_proper_for_sampling<F: Real>(p: &PdParams<F>) -> Result<()> {
    if p.domain() == crate::laws::ParamDomain::Dislocation {
        return Err(Error::Domain(
            "sampling needs a proper (alpha, theta) pair; the dislocation pair \
             is not normalizable"
                .into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(seed: u64) -> RandomStream {
        RandomStream::new(seed, 0)
    }

    fn params(alpha: f64, theta: f64) -> PdParams<f64> {
        PdParams::new(alpha, theta).unwrap()
    }

    #[test]
    fn streams_reproduce_and_differ() {
        let mut a = RandomStream::new(7, 3);
        let mut b = RandomStream::new(7, 3);
        let mut c = RandomStream::new(7, 4);
        let xs: Vec<u64> = (0..32).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..32).map(|_| b.next_u64()).collect();
        let zs: Vec<u64> = (0..32).map(|_| c.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
    }

    #[test]
    fn identical_streams_give_identical_partitions() {
        let p = params(0.5, 0.5);
        let mut a = RandomStream::new(11, 9);
        let mut b = RandomStream::new(11, 9);
        for _ in 0..20 {
            assert_eq!(
                sample_crp(&p, 6, &mut a).unwrap(),
                sample_crp(&p, 6, &mut b).unwrap()
            );
        }
    }

    #[test]
    fn gem_accounts_for_all_mass() {
        let mut rng = stream(1);
        for _ in 0..50 {
            let s = sample_gem(&params(0.4, 0.0), 1e-6, &mut rng).unwrap();
            assert!(s.is_proper(1e-12));
            assert!(s.dust_bound() < 1e-6);
            assert!(!s.sticks().is_empty());
        }
    }

    #[test]
    fn gem_first_stick_mean() {
        // E[Y1] = (1-alpha)/(1+theta); at theta = 0 that is 1 - t.
        let t = 0.4;
        let mut rng = stream(2);
        let reps = 20_000;
        let mut acc = KahanSum::new();
        for _ in 0..reps {
            let s = sample_gem(&params(t, 0.0), 0.5, &mut rng).unwrap();
            acc.add(s.sticks()[0]);
        }
        let mean = acc.value() / reps as f64;
        let se = (t * (1.0 - t) / 2.0 / reps as f64).sqrt();
        assert!((mean - (1.0 - t)).abs() < 4.0 * se, "mean = {mean}");
    }

    #[test]
    fn gem_uniform_sticks_when_alpha_zero_theta_one() {
        // Stick fractions are iid Uniform(0,1); check the first.
        let mut rng = stream(3);
        let reps = 20_000;
        let mut acc = KahanSum::new();
        for _ in 0..reps {
            let s = sample_gem(&params(0.0, 1.0), 0.5, &mut rng).unwrap();
            acc.add(s.sticks()[0]);
        }
        let mean = acc.value() / reps as f64;
        let se = (1.0f64 / 12.0 / reps as f64).sqrt();
        assert!((mean - 0.5).abs() < 4.0 * se, "mean = {mean}");
    }

    #[test]
    fn gem_rejects_dislocation_pair() {
        let p = PdParams::dislocation(0.5f64).unwrap();
        assert!(sample_gem(&p, 1e-3, &mut stream(4)).is_err());
        assert!(sample_gem(&params(0.5, 0.0), 1.5, &mut stream(4)).is_err());
    }

    #[test]
    fn ranked_draw_is_sorted_with_small_dust() {
        let mut rng = stream(5);
        for _ in 0..50 {
            let m = sample_pd_ranked(&params(0.3, 0.0), 1e-6, &mut rng).unwrap();
            assert!(m.dust_bound() < 1e-6);
            let ms = m.masses();
            assert!(ms.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn ranked_sum_of_squares_matches_pair_probability() {
        // E[sum s_i^2] = 1 - alpha for PD(alpha, 0).
        let alpha = 0.3;
        let mut rng = stream(6);
        let reps = 20_000;
        let mut acc = KahanSum::new();
        let mut sq = KahanSum::new();
        for _ in 0..reps {
            let m = sample_pd_ranked(&params(alpha, 0.0), 1e-6, &mut rng).unwrap();
            let v = m.sum_squares();
            acc.add(v);
            sq.add(v * v);
        }
        let mean = acc.value() / reps as f64;
        let var = (sq.value() / reps as f64 - mean * mean).max(0.0);
        let se = (var / reps as f64).sqrt();
        assert!(
            (mean - (1.0 - alpha)).abs() < 4.0 * se + 2e-6,
            "mean = {mean}, se = {se}"
        );
    }

    #[test]
    fn crp_single_element() {
        let pi = sample_crp(&params(0.5, 0.5), 1, &mut stream(7)).unwrap();
        assert_eq!(pi, SetPartition::single_block(1).unwrap());
    }

    #[test]
    fn crp_two_elements_theta_zero() {
        // P(together) = (1-alpha)/(1+theta) = 0.5 at (0.5, 0).
        let mut rng = stream(8);
        let reps = 20_000;
        let mut together = 0u32;
        for _ in 0..reps {
            if sample_crp(&params(0.5, 0.0), 2, &mut rng)
                .unwrap()
                .is_single_block()
            {
                together += 1;
            }
        }
        let phat = together as f64 / reps as f64;
        let se = (0.25f64 / reps as f64).sqrt();
        assert!((phat - 0.5).abs() < 4.0 * se, "phat = {phat}");
    }

    #[test]
    fn crp_two_elements_negative_theta() {
        // The linear-scan path: P(apart) = (theta+alpha)/(1+theta) = 4/7.
        let mut rng = stream(9);
        let reps = 20_000;
        let mut apart = 0u32;
        for _ in 0..reps {
            if !sample_crp(&params(0.7, -0.3), 2, &mut rng)
                .unwrap()
                .is_single_block()
            {
                apart += 1;
            }
        }
        let p = 4.0 / 7.0;
        let phat = apart as f64 / reps as f64;
        let se = (p * (1.0 - p) / reps as f64).sqrt();
        assert!((phat - p).abs() < 4.0 * se, "phat = {phat}");
    }

    #[test]
    fn crp_matches_eppf_on_three_elements() {
        use crate::laws::{eppf_pd, Composition};
        let p = params(0.3, 0.5);
        let mut rng = stream(10);
        let reps = 30_000usize;
        // Count by number of blocks: 1, 3 (the two-block ones are symmetric), 1.
        let mut by_shape = [0u32; 3];
        for _ in 0..reps {
            let pi = sample_crp(&p, 3, &mut rng).unwrap();
            by_shape[pi.num_blocks() - 1] += 1;
        }
        let probs = [
            eppf_pd(&p, &Composition::new(vec![3]).unwrap()).unwrap(),
            3.0 * eppf_pd(&p, &Composition::new(vec![1, 2]).unwrap()).unwrap(),
            eppf_pd(&p, &Composition::new(vec![1, 1, 1]).unwrap()).unwrap(),
        ];
        for (count, prob) in by_shape.iter().zip(probs) {
            let phat = *count as f64 / reps as f64;
            let se = (prob * (1.0 - prob) / reps as f64).sqrt();
            assert!((phat - prob).abs() < 4.5 * se, "phat = {phat}, p = {prob}");
        }
    }

    #[test]
    fn paint_box_degenerate_cases() {
        let mut rng = stream(11);
        let one = MassPartition::new(vec![1.0f64], 0.0).unwrap();
        assert!(paint_box(&one, 5, &mut rng).unwrap().is_single_block());
        let dust = MassPartition::new(vec![], 1.0f64).unwrap();
        assert!(paint_box(&dust, 5, &mut rng).unwrap().is_singletons());
    }

    #[test]
    fn paint_box_pair_probability() {
        let mut rng = stream(12);
        let s = MassPartition::new(vec![0.5f64, 0.5], 0.0).unwrap();
        let reps = 20_000;
        let mut together = 0u32;
        for _ in 0..reps {
            let pi = paint_box(&s, 2, &mut rng).unwrap();
            if pi.is_single_block() {
                together += 1;
            }
        }
        let phat = together as f64 / reps as f64;
        let se = (0.25f64 / reps as f64).sqrt();
        assert!((phat - 0.5).abs() < 4.0 * se, "phat = {phat}");
    }

    #[test]
    fn size_biased_permutation_basics() {
        let mut rng = stream(13);
        let single = MassPartition::new(vec![1.0f64], 0.0).unwrap();
        let s = size_biased_permutation(&single, &mut rng).unwrap();
        assert_eq!(s.sticks(), &[1.0]);
        let zero = MassPartition::new(vec![], 0.3f64).unwrap();
        assert!(size_biased_permutation(&zero, &mut rng).is_err());
    }

    #[test]
    fn size_biased_first_entry_probability() {
        let mut rng = stream(14);
        let s = MassPartition::new(vec![0.9f64, 0.1], 0.0).unwrap();
        let reps = 20_000;
        let mut big_first = 0u32;
        for _ in 0..reps {
            let perm = size_biased_permutation(&s, &mut rng).unwrap();
            assert_eq!(perm.sticks().len(), 2);
            if perm.sticks()[0] == 0.9 {
                big_first += 1;
            }
        }
        let phat = big_first as f64 / reps as f64;
        let se = (0.9f64 * 0.1 / reps as f64).sqrt();
        assert!((phat - 0.9).abs() < 4.0 * se, "phat = {phat}");
    }

    #[test]
    fn nu_mass_matches_log_limit_and_monotonicity() {
        // t -> 0 collapses the integrand to (1-y)^{-1}.
        let m: f64 = nu_restricted_mass(1e-9, 0.9).unwrap();
        assert!((m - 10.0f64.ln()).abs() < 1e-6, "m = {m}");
        for t in [0.1f64, 0.3, 0.5, 0.7, 0.9] {
            assert!(
                nu_restricted_mass(t, 0.5).unwrap() < nu_restricted_mass(t, 0.9).unwrap()
            );
        }
        for cap in [0.3f64, 0.6, 0.9] {
            assert!(
                nu_restricted_mass(0.2, cap).unwrap() < nu_restricted_mass(0.6, cap).unwrap()
            );
        }
        assert!(nu_restricted_mass(0.5f64, 1.0).is_err());
    }

    #[test]
    fn nu_mass_respects_paper_bound() {
        // mass(t, 1-eps) <= 2(-ln eps + 2) for t <= 1/2.
        for t in [0.1f64, 0.3, 0.5] {
            for eps in [1e-3f64, 1e-6, 1e-9] {
                let m = nu_restricted_mass(t, 1.0 - eps).unwrap();
                assert!(m <= 2.0 * (-eps.ln() + 2.0), "t = {t}, eps = {eps}, m = {m}");
            }
        }
    }

    #[test]
    fn nu_cdf_agrees_with_quadrature_away_from_endpoints() {
        use crate::numeric::integrate_gl;
        for t in [0.2f64, 0.5, 0.8] {
            for x in [0.3f64, 0.5, 0.7, 0.95] {
                let series = nu_cdf_unnorm(t, x);
                let quad = nu_cdf_unnorm(t, 0.25)
                    + integrate_gl(
                        |y: f64| y.powf(-t) / (1.0 - y),
                        0.25,
                        x,
                        64,
                    );
                assert!((series - quad).abs() < 1e-10, "t = {t}, x = {x}");
            }
        }
    }

    #[test]
    fn nu_inversion_hits_median() {
        for t in [0.2f64, 0.5, 0.8] {
            let cap = 0.9;
            let z = nu_restricted_mass(t, cap).unwrap();
            let x = bisect_increasing(
                |y| nu_cdf_unnorm(t, y),
                z / 2.0,
                0.0,
                cap,
                1e-16,
                1e-9,
            )
            .unwrap();
            assert!((nu_cdf_unnorm(t, x) - z / 2.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn nu_draws_respect_cap_and_sum_to_one() {
        let mut rng = stream(15);
        for _ in 0..200 {
            let s = sample_nu_sizebiased(0.3f64, 0.6, &mut rng).unwrap();
            assert!(s.sticks()[0] <= 0.6);
            assert!(s.is_proper(1e-9));
        }
    }

    #[test]
    fn nu_conditional_remainder_has_pd_diversity() {
        // Given the first entry x, sum((s_i/(1-x))^2) over the rest has
        // mean 1 - t under PD(t, 0).
        let t = 0.3;
        let mut rng = stream(16);
        let reps = 4_000;
        let mut acc = KahanSum::new();
        let mut sq = KahanSum::new();
        for _ in 0..reps {
            let s = sample_nu_sizebiased(t, 0.9, &mut rng).unwrap();
            let x = s.sticks()[0];
            let rest = 1.0 - x;
            let v: f64 = s.sticks()[1..]
                .iter()
                .map(|&m| (m / rest) * (m / rest))
                .sum();
            acc.add(v);
            sq.add(v * v);
        }
        let mean = acc.value() / reps as f64;
        let var = (sq.value() / reps as f64 - mean * mean).max(0.0);
        let se = (var / reps as f64).sqrt();
        assert!(
            (mean - (1.0 - t)).abs() < 4.0 * se + 1e-5,
            "mean = {mean}, se = {se}"
        );
    }

    #[test]
    fn sequence_serde_round_trip() {
        let s = SizeBiasedSequence::new(vec![0.5f64, 0.3], 0.2).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains("sticks") && json.contains("dust_bound"));
        let back: SizeBiasedSequence<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let bad: std::result::Result<SizeBiasedSequence<f64>, _> =
            serde_json::from_str(r#"{"sticks":[0.9,0.9],"dust_bound":0.0}"#);
        assert!(bad.is_err());
    }
}
