//! Trajectory simulators: the exact nested semigroup sampler, the
//! continuous-time jump chain driven by the split rates, the
//! Bolthausen-Sznitman coalescent, and the time reversal between the two
//! directions.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laws::{self, PdParams};
use crate::numeric::bisect_increasing;
use crate::oracle;
use crate::partition::SetPartition;
use crate::sample::{sample_crp, RandomStream};
use crate::scalar::{c, Real};

/// Which way a trajectory runs: fragmentation refines as time moves through
/// (0,1); the coalescent coarsens as time moves through [0, infinity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Fragmentation,
    Coalescent,
}

/// A piecewise-constant partition-valued path: the state before the first
/// event plus the strictly ordered list of post-event states.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory<F> {
    n: usize,
    direction: Direction,
    initial: SetPartition,
    events: Vec<(F, SetPartition)>,
}

impl<F: Real> Trajectory<F> {
    /// Validates the chain structure: strictly increasing times in the
    /// direction's window, and each event splitting exactly one block
    /// (fragmentation) or merging one group of blocks (coalescent).
    pub fn new(
        n: usize,
        direction: Direction,
        initial: SetPartition,
        events: Vec<(F, SetPartition)>,
    ) -> Result<Self> {
        if initial.n() != n {
            return Err(Error::MalformedPartition(format!(
                "initial partition is over [{}], trajectory over [{}]",
                initial.n(),
                n
            )));
        }
        let mut prev_time: Option<F> = None;
        let mut prev_state = &initial;
        for (time, state) in &events {
            match direction {
                Direction::Fragmentation => {
                    if !(*time > F::zero() && *time < F::one()) {
                        return Err(Error::InvalidArgument(format!(
                            "fragmentation time {time} outside (0,1)"
                        )));
                    }
                }
                Direction::Coalescent => {
                    if !(*time >= F::zero() && time.is_finite()) {
                        return Err(Error::InvalidArgument(format!(
                            "coalescent time {time} outside [0,inf)"
                        )));
                    }
                }
            }
            if let Some(p) = prev_time {
                if !(*time > p) {
                    return Err(Error::InvalidArgument(
                        "event times must be strictly increasing".into(),
                    ));
                }
            }
            let (fine, coarse) = match direction {
                Direction::Fragmentation => (state, prev_state),
                Direction::Coalescent => (prev_state, state),
            };
            if !fine.refines(coarse) {
                return Err(Error::MalformedPartition(
                    "consecutive states must be nested in the trajectory direction".into(),
                ));
            }
            // Exactly one coarse block may be touched, and it must break
            // into at least two fine blocks.
            let mut touched = 0usize;
            for block in coarse.blocks() {
                let pieces = fine
                    .blocks()
                    .iter()
                    .filter(|fb| fb.iter().all(|e| block.contains(e)))
                    .count();
                if pieces > 1 {
                    touched += 1;
                }
            }
            if touched != 1 {
                return Err(Error::MalformedPartition(format!(
                    "each event must change exactly one block, found {touched}"
                )));
            }
            prev_time = Some(*time);
            prev_state = state;
        }
        Ok(Trajectory {
            n,
            direction,
            initial,
            events,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn initial(&self) -> &SetPartition {
        &self.initial
    }

    pub fn events(&self) -> &[(F, SetPartition)] {
        &self.events
    }

    pub fn final_state(&self) -> &SetPartition {
        self.events.last().map_or(&self.initial, |(_, s)| s)
    }

    /// State at the given time: the last event at or before it, or the
    /// initial state when no event has happened yet.
    pub fn state_at(&self, time: F) -> &SetPartition {
        match self
            .events
            .iter()
            .rev()
            .find(|(event_time, _)| *event_time <= time)
        {
            Some((_, state)) => state,
            None => &self.initial,
        }
    }

    /// First event strictly inside (lo, hi], if any.
    pub fn first_event_in(&self, lo: F, hi: F) -> Option<&(F, SetPartition)> {
        self.events.iter().find(|(t, _)| *t > lo && *t <= hi)
    }

    /// JSON-lines rendering: one header record, then one record per event.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        let dir = match self.direction {
            Direction::Fragmentation => "fragmentation",
            Direction::Coalescent => "coalescent",
        };
        out.push_str(
            &serde_json::json!({
                "n": self.n,
                "direction": dir,
                "initial": &self.initial,
            })
            .to_string(),
        );
        out.push('\n');
        for (time, state) in &self.events {
            out.push_str(
                &serde_json::json!({
                    "time": time.to_f64(),
                    "partition": state,
                })
                .to_string(),
            );
            out.push('\n');
        }
        out
    }
}

/// Knobs for the jump-chain engine.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineConfig {
    /// Largest block size the exhaustive splitter enumeration will accept.
    pub enumeration_cap: usize,
    /// Time tolerance for the holding-time bisection.
    pub bisection_tol: f64,
    /// Default time horizon for coalescent runs.
    pub horizon: f64,
}

impl EngineConfig {
    pub fn new(enumeration_cap: usize, bisection_tol: f64, horizon: f64) -> Result<Self> {
        if enumeration_cap > oracle::MAX_ENUMERATION_N {
            return Err(Error::Config(format!(
                "enumeration cap {enumeration_cap} exceeds the Bell-table bound {}",
                oracle::MAX_ENUMERATION_N
            )));
        }
        if !(bisection_tol > 0.0) || !(horizon > 0.0) {
            return Err(Error::Config(
                "bisection tolerance and horizon must be positive".into(),
            ));
        }
        Ok(EngineConfig {
            enumeration_cap,
            bisection_tol,
            horizon,
        })
    }
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            enumeration_cap: 10,
            bisection_tol: 1e-12,
            horizon: 1.0,
        }
    }
}

/// Exact nested marginals via the semigroup: the state at t_1 is CRP(t_1, 0)
/// and each later state splits every block of the previous one with an
/// independent CRP(t_{j+1}, -t_j) partition.
pub fn sample_marginal_semigroup<F: Real>(
    ts: &[F],
    n: usize,
    rng: &mut RandomStream,
) -> Result<Vec<SetPartition>> {
    if ts.is_empty() {
        return Err(Error::InvalidArgument("need at least one time".into()));
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "times must be strictly increasing".into(),
        ));
    }
    for &t in ts {
        if !(t > F::zero() && t < F::one()) {
            return Err(Error::Domain(format!("time {t} outside (0,1)")));
        }
    }
    let mut states = Vec::with_capacity(ts.len());
    let first = PdParams::new(ts[0], F::zero())?;
    states.push(sample_crp(&first, n, rng)?);
    for j in 1..ts.len() {
        let step = PdParams::new(ts[j], -ts[j - 1])?;
        let prev: &SetPartition = states.last().expect("nonempty");
        let splitters = prev
            .blocks()
            .iter()
            .map(|b| sample_crp(&step, b.len(), rng))
            .collect::<Result<Vec<_>>>()?;
        let next = prev.frag(&splitters)?;
        states.push(next);
    }
    Ok(states)
}

/// Inverts the survival function of a size-m block born at time t0 at a
/// uniform draw u: the time tau with survival(t0, tau, m) = u. Exact for
/// m = 2; bisection on the log-survival otherwise.
pub(crate) fn first_split_time<F: Real>(t0: F, m: usize, u: F, tol: f64) -> Result<F> {
    if m == 2 {
        return Ok(F::one() - u * (F::one() - t0));
    }
    let target = -u.ln();
    let g = |t: F| -laws::survival(t0, t, m).expect("valid bracket").ln();
    bisect_increasing(g, target, t0, F::one() - c(1e-15), c(tol), F::zero())
}

/// Samples a splitter for a block of m elements at time tau: a partition of
/// [m] other than the single block, with probability proportional to its
/// jump rate. Exhaustive enumeration, exact at desk scale.
fn sample_splitter<F: Real>(
    tau: F,
    m: usize,
    rng: &mut RandomStream,
) -> Result<SetPartition> {
    let pool = oracle::nontrivial_partitions(m)?;
    let mut cum = Vec::with_capacity(pool.len());
    let mut acc = F::zero();
    for pi in &pool {
        acc = acc + laws::jump_rate(tau, pi)?;
        cum.push(acc);
    }
    let u = F::open01(rng) * acc;
    let idx = cum.partition_point(|&edge| edge <= u).min(pool.len() - 1);
    Ok(pool[idx].clone())
}

/// The fragmentation jump chain on [n] from the single block at time 0 up to
/// t_end: per-block first-split times are drawn lazily by inverting the
/// survival product, the earliest clock fires, and the fired block is split
/// by a rate-weighted partition of its elements.
pub fn simulate_jump_chain<F: Real>(
    n: usize,
    t_end: F,
    cfg: &EngineConfig,
    rng: &mut RandomStream,
) -> Result<Trajectory<F>> {
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one element".into()));
    }
    if n > cfg.enumeration_cap {
        return Err(Error::Config(format!(
            "initial block size {n} exceeds the enumeration cap {}",
            cfg.enumeration_cap
        )));
    }
    if !(t_end > F::zero() && t_end < F::one()) {
        return Err(Error::Domain(format!("end time {t_end} outside (0,1)")));
    }
    // Active blocks with their pending split times; None once past t_end.
    // Block counts stay tiny (at most n <= 12), so a scan per event is the
    // whole priority queue.
    struct Clock<F> {
        elements: Vec<usize>,
        split_at: Option<F>,
    }
    let arm = |elements: Vec<usize>, birth: F, rng: &mut RandomStream| -> Result<Clock<F>> {
        if elements.len() < 2 {
            return Ok(Clock {
                elements,
                split_at: None,
            });
        }
        let u = F::open01(rng);
        // Survives past t_end: leave the clock unarmed.
        if laws::survival(birth, t_end, elements.len())? >= u {
            return Ok(Clock {
                elements,
                split_at: None,
            });
        }
        let tau = first_split_time(birth, elements.len(), u, cfg.bisection_tol)?;
        Ok(Clock {
            elements,
            split_at: Some(tau),
        })
    };
    let mut clocks = vec![arm((1..=n).collect(), F::zero(), rng)?];
    let mut events: Vec<(F, SetPartition)> = Vec::new();
    loop {
        let next = clocks
            .iter()
            .enumerate()
            .filter_map(|(i, b)| b.split_at.map(|t| (i, t)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite times"));
        let Some((idx, tau)) = next else { break };
        let fired = clocks.swap_remove(idx);
        let m = fired.elements.len();
        let splitter = sample_splitter(tau, m, rng)?;
        // Map the splitter's blocks through the fired block's elements
        // (both sides sorted increasing).
        for part in splitter.blocks() {
            let elements: Vec<usize> = part.iter().map(|&j| fired.elements[j - 1]).collect();
            clocks.push(arm(elements, tau, rng)?);
        }
        let mut blocks: Vec<Vec<usize>> = clocks.iter().map(|b| b.elements.clone()).collect();
        blocks.sort_by_key(|b| b[0]);
        events.push((tau, SetPartition::from_blocks(blocks)?));
    }
    Trajectory::new(
        n,
        Direction::Fragmentation,
        SetPartition::single_block(n)?,
        events,
    )
}

/// The Bolthausen-Sznitman coalescent on [n] from singletons: with b blocks
/// the total merge rate is b-1 and a merge of k blocks happens with
/// probability b/(k(k-1)(b-1)), the k-set chosen uniformly.
pub fn simulate_coalescent<F: Real>(
    n: usize,
    horizon: F,
    rng: &mut RandomStream,
) -> Result<Trajectory<F>> {
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one element".into()));
    }
    if !(horizon > F::zero()) {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} must be positive"
        )));
    }
    let mut blocks: Vec<Vec<usize>> = (1..=n).map(|i| vec![i]).collect();
    let mut time = F::zero();
    let mut events = Vec::new();
    while blocks.len() > 1 {
        let b = blocks.len();
        let total: F = c::<F>(b as f64) - F::one();
        time = time + F::exp1(rng) / total;
        if time > horizon {
            break;
        }
        // Invert the merge-size law: cumulative through K is b(1-1/K)/(b-1).
        let u = F::open01(rng);
        let bf: F = c(b as f64);
        let k_real = F::one() / (F::one() - u * (bf - F::one()) / bf);
        let k = (k_real
            .ceil()
            .to_f64()
            .expect("small block count") as usize)
            .clamp(2, b);
        let chosen = rand::seq::index::sample(rng, b, k).into_vec();
        let mut merged: Vec<usize> = Vec::new();
        let mut keep: Vec<Vec<usize>> = Vec::with_capacity(b - k + 1);
        for (i, block) in blocks.into_iter().enumerate() {
            if chosen.contains(&i) {
                merged.extend(block);
            } else {
                keep.push(block);
            }
        }
        merged.sort_unstable();
        keep.push(merged);
        blocks = keep;
        events.push((time, SetPartition::from_blocks(blocks.clone())?));
    }
    Trajectory::new(
        n,
        Direction::Coalescent,
        SetPartition::singletons(n)?,
        events,
    )
}

/// Time reversal between the two directions through s = -ln t: the reversed
/// events replay the original ones backwards, each carrying the state that
/// preceded it. Applying the reversal twice restores the trajectory.
pub fn reverse_time<F: Real>(traj: &Trajectory<F>) -> Result<Trajectory<F>> {
    let (new_direction, map): (Direction, fn(F) -> F) = match traj.direction() {
        Direction::Fragmentation => (Direction::Coalescent, |t: F| -t.ln()),
        Direction::Coalescent => (Direction::Fragmentation, |s: F| (-s).exp()),
    };
    if traj.direction() == Direction::Coalescent
        && traj.events().iter().any(|(s, _)| *s <= F::zero())
    {
        return Err(Error::Domain(
            "coalescent time 0 maps to fragmentation time 1, outside (0,1)".into(),
        ));
    }
    let mut events = Vec::with_capacity(traj.events().len());
    for (j, (time, _)) in traj.events().iter().enumerate().rev() {
        let before = if j == 0 {
            traj.initial()
        } else {
            &traj.events()[j - 1].1
        };
        events.push((map(*time), before.clone()));
    }
    Trajectory::new(
        traj.n(),
        new_direction,
        traj.final_state().clone(),
        events,
    )
}

/// Frequency of the block containing element i at the start and after each
/// event, as exact rationals over n.
pub fn tagged_fragment_path<F: Real>(
    traj: &Trajectory<F>,
    i: usize,
) -> Result<Vec<(F, Ratio<u64>)>> {
    if i < 1 || i > traj.n() {
        return Err(Error::InvalidArgument(format!(
            "element {i} outside the ground set [{}]",
            traj.n()
        )));
    }
    let freq = |state: &SetPartition| -> Result<Ratio<u64>> {
        let block = state.block_of(i)?;
        Ok(Ratio::new(
            state.blocks()[block].len() as u64,
            traj.n() as u64,
        ))
    };
    let mut path = vec![(F::zero(), freq(traj.initial())?)];
    for (time, state) in traj.events() {
        path.push((*time, freq(state)?));
    }
    Ok(path)
}
