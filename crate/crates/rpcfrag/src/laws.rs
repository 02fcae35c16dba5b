//! Closed-form laws of the fragmentation family and its coalescent dual:
//! rising factorials, the exchangeable partition probability functions, jump
//! rates, split hazards, survival, coalescent merge rates, and the moments of
//! the tagged fragment.
//!
//! Everything evaluates in log space (products of rising factorials overflow
//! past n ≈ 170). Ratios of factor ladders with the same offset are combined
//! by netting exponents per factor, so exact cancellations survive floating
//! point and identities like the erosion rate hold to 1e-12 at n ~ 1e3.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::partition::SetPartition;
use crate::scalar::Real;

/// Which parameter regime a [`PdParams`] lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamDomain {
    /// Proper two-parameter law: 0 ≤ α < 1, θ > −α.
    Proper,
    /// Dislocation pair (α, −α), 0 < α < 1: a σ-finite measure, not a law.
    Dislocation,
}

/// Parameter pair (α, θ) of the two-parameter Poisson-Dirichlet family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "RawParams<F>",
    into = "RawParams<F>",
    bound(
        serialize = "F: Real + Serialize",
        deserialize = "F: Real + Deserialize<'de>"
    )
)]
pub struct PdParams<F> {
    alpha: F,
    theta: F,
}

/// Wire shape of [`PdParams`]; construction revalidates the domain.
#[derive(Serialize, Deserialize)]
struct RawParams<F> {
    alpha: F,
    theta: F,
}

impl<F: Real> TryFrom<RawParams<F>> for PdParams<F> {
    type Error = Error;
    fn try_from(raw: RawParams<F>) -> Result<Self> {
        PdParams::new(raw.alpha, raw.theta)
    }
}

impl<F> From<PdParams<F>> for RawParams<F> {
    fn from(p: PdParams<F>) -> Self {
        RawParams {
            alpha: p.alpha,
            theta: p.theta,
        }
    }
}

impl<F: Real> PdParams<F> {
    /// Accepts the proper domain 0 ≤ α < 1, θ > −α and the dislocation pair
    /// θ = −α with 0 < α < 1; rejects everything else.
    pub fn new(alpha: F, theta: F) -> Result<Self> {
        let proper = alpha >= F::zero() && alpha < F::one() && theta > -alpha;
        let dislocation = alpha > F::zero() && alpha < F::one() && theta == -alpha;
        if !(proper || dislocation) {
            return Err(Error::Domain(format!(
                "(alpha, theta) = ({alpha}, {theta}) outside 0 <= alpha < 1, theta >= -alpha"
            )));
        }
        Ok(PdParams { alpha, theta })
    }

    /// The dislocation pair (α, −α).
    pub fn dislocation(alpha: F) -> Result<Self> {
        if !(alpha > F::zero() && alpha < F::one()) {
            return Err(Error::Domain(format!(
                "dislocation index {alpha} outside (0,1)"
            )));
        }
        Ok(PdParams {
            alpha,
            theta: -alpha,
        })
    }

    pub fn alpha(&self) -> F {
        self.alpha
    }

    pub fn theta(&self) -> F {
        self.theta
    }

    pub fn domain(&self) -> ParamDomain {
        if self.theta == -self.alpha {
            ParamDomain::Dislocation
        } else {
            ParamDomain::Proper
        }
    }

    fn require_proper(&self, what: &str) -> Result<()> {
        if self.domain() == ParamDomain::Dislocation {
            return Err(Error::Domain(format!(
                "{what} needs a proper (alpha, theta) pair, got the dislocation pair ({}, {})",
                self.alpha, self.theta
            )));
        }
        Ok(())
    }
}

/// Unordered block sizes (n₁,…,n_k) of a partition of n = Σ nᵢ elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidArgument(
                "composition needs at least one positive part".into(),
            ));
        }
        Ok(Composition { parts })
    }

    pub fn from_partition(pi: &SetPartition) -> Self {
        Composition {
            parts: pi.block_sizes(),
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Total number of elements n.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts k.
    pub fn k(&self) -> usize {
        self.parts.len()
    }
}

/// Rising factorial [x]_n = x(x+1)⋯(x+n−1), linear form.
pub fn rising<F: Real>(x: F, n: usize) -> F {
    let mut acc = F::one();
    for i in 0..n {
        acc = acc * (x + F::from_usize(i).expect("small index"));
    }
    acc
}

/// Sign and log magnitude of [x]_n; sign 0 encodes an exact zero.
pub fn rising_signed_ln<F: Real>(x: F, n: usize) -> (i32, F) {
    let mut sign = 1i32;
    let mut acc = KahanSum::new();
    for i in 0..n {
        let factor = x + F::from_usize(i).expect("small index");
        if factor == F::zero() {
            return (0, F::neg_infinity());
        }
        if factor < F::zero() {
            sign = -sign;
        }
        acc.add(factor.abs().ln());
    }
    (sign, acc.value())
}

/// ln [x]_n for x > 0; domain error when any factor is nonpositive.
fn ln_rising_pos<F: Real>(x: F, n: usize) -> Result<F> {
    if n > 0 && x <= F::zero() {
        return Err(Error::Domain(format!(
            "log-scale rising factorial needs positive factors, got x = {x}"
        )));
    }
    let mut acc = KahanSum::new();
    for i in 0..n {
        acc.add((x + F::from_usize(i).expect("small index")).ln());
    }
    Ok(acc.value())
}

fn ln_factorial<F: Real>(m: usize) -> F {
    F::from_usize(m + 1).expect("factorial argument").ln_gamma()
}

fn check_time<F: Real>(t: F) -> Result<()> {
    if !(t > F::zero() && t < F::one()) {
        return Err(Error::Domain(format!("time {t} outside (0,1)")));
    }
    Ok(())
}

/// EPPF of the proper (α, θ) family; θ = 0 uses its own closed form.
pub fn eppf_pd<F: Real>(p: &PdParams<F>, comp: &Composition) -> Result<F> {
    p.require_proper("eppf_pd")?;
    let (alpha, theta) = (p.alpha(), p.theta());
    let (n, k) = (comp.n(), comp.k());
    if alpha == F::zero() {
        // Ewens: θ^{k−1} ∏(nᵢ−1)! / [1+θ]_{n−1}.
        let mut ln = KahanSum::new();
        ln.add(F::from_usize(k - 1).expect("k") * theta.ln());
        for &part in comp.parts() {
            ln.add(ln_factorial::<F>(part - 1));
        }
        ln.add(-ln_rising_pos(F::one() + theta, n - 1)?);
        return Ok(ln.value().exp());
    }
    if theta == F::zero() {
        // Continuity extension: (k−1)! α^{k−1} / (n−1)! ∏[1−α]_{nᵢ−1}.
        let mut ln = KahanSum::new();
        ln.add(ln_factorial::<F>(k - 1));
        ln.add(F::from_usize(k - 1).expect("k") * alpha.ln());
        ln.add(-ln_factorial::<F>(n - 1));
        for &part in comp.parts() {
            ln.add(ln_rising_pos(F::one() - alpha, part - 1)?);
        }
        return Ok(ln.value().exp());
    }
    // General: [θ/α]_k ∏(−[−α]_{nᵢ}) / [θ]_n with −[−α]_m = α[1−α]_{m−1}.
    let (num_sign, num_ln) = rising_signed_ln(theta / alpha, k);
    let (den_sign, den_ln) = rising_signed_ln(theta, n);
    if num_sign * den_sign != 1 {
        return Err(Error::Numeric(format!(
            "sign degeneracy in EPPF at (alpha, theta) = ({alpha}, {theta})"
        )));
    }
    let mut ln = KahanSum::new();
    ln.add(num_ln);
    ln.add(-den_ln);
    for &part in comp.parts() {
        ln.add(alpha.ln());
        ln.add(ln_rising_pos(F::one() - alpha, part - 1)?);
    }
    Ok(ln.value().exp())
}

/// EPPF of the time-t partition: (k−1)!/(n−1)!·t^{k−1}·∏[1−t]_{nᵢ−1}.
pub fn eppf_ruelle<F: Real>(t: F, comp: &Composition) -> Result<F> {
    check_time(t)?;
    let (n, k) = (comp.n(), comp.k());
    let mut ln = KahanSum::new();
    ln.add(ln_factorial::<F>(k - 1));
    ln.add(-ln_factorial::<F>(n - 1));
    ln.add(F::from_usize(k - 1).expect("k") * t.ln());
    for &part in comp.parts() {
        ln.add(ln_rising_pos(F::one() - t, part - 1)?);
    }
    Ok(ln.value().exp())
}

/// Dislocation measure of the splitting shape: (k−2)!·∏(−[−t]_{nᵢ})/(−[−t]_n)
/// for k ≥ 2. A measure value: it may exceed 1.
pub fn eppf_dislocation<F: Real>(t: F, comp: &Composition) -> Result<F> {
    check_time(t)?;
    let (n, k) = (comp.n(), comp.k());
    if k < 2 {
        return Err(Error::Domain(
            "dislocation measure is undefined on the one-block shape".into(),
        ));
    }
    let mut ln = KahanSum::new();
    ln.add(ln_factorial::<F>(k - 2));
    for &part in comp.parts() {
        ln.add(t.ln());
        ln.add(ln_rising_pos(F::one() - t, part - 1)?);
    }
    ln.add(-(t.ln() + ln_rising_pos(F::one() - t, n - 1)?));
    Ok(ln.value().exp())
}

/// Instantaneous rate at which the restricted chain jumps from 𝟏 to π:
/// q_t(n₁,…,n_k) / (t(k−1)q_t(n)).
///
/// The (1−t)-ladders of numerator and denominator are netted per factor, so
/// shared factors cancel exactly instead of riding through two long sums.
pub fn jump_rate<F: Real>(t: F, pi: &SetPartition) -> Result<F> {
    check_time(t)?;
    if pi.is_single_block() {
        return Err(Error::Domain(
            "jump rate is undefined for the one-block partition".into(),
        ));
    }
    let n = pi.n();
    let k = pi.num_blocks();
    // Net exponent of (i−t): blocks of size > i contribute +1 each through
    // ∏[1−t]_{nᵢ−1}; the denominator ladder [1−t]_{n−1} contributes −1.
    let mut exponent = vec![-1i64; n]; // index i in 1..=n−1 at exponent[i]
    exponent[0] = -1;
    for &size in &pi.block_sizes() {
        for e in exponent.iter_mut().take(size).skip(1) {
            *e += 1;
        }
    }
    let mut ln = KahanSum::new();
    ln.add(ln_factorial::<F>(k - 2));
    ln.add(F::from_usize(k - 2).expect("k") * t.ln());
    for (i, &e) in exponent.iter().enumerate().skip(1) {
        if e != 0 {
            ln.add(F::from_i64(e).expect("small exponent") * (F::from_usize(i).expect("i") - t).ln());
        }
    }
    Ok(ln.value().exp())
}

/// Total fragmentation hazard of a block of m elements: Σ_{i<m} 1/(i−t).
pub fn split_rate<F: Real>(t: F, m: usize) -> Result<F> {
    check_time(t)?;
    if m < 2 {
        return Err(Error::Domain(format!("split rate needs m >= 2, got {m}")));
    }
    let mut acc = KahanSum::new();
    for i in 1..m {
        acc.add((F::from_usize(i).expect("i") - t).recip());
    }
    Ok(acc.value())
}

/// Probability that a block of m elements, intact at time t0, is still
/// intact at time t: ∏_{i<m} (i−t)/(i−t0).
pub fn survival<F: Real>(t0: F, t: F, m: usize) -> Result<F> {
    if !(t0 >= F::zero() && t0 <= t && t < F::one()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= t0 <= t < 1, got t0 = {t0}, t = {t}"
        )));
    }
    if m < 2 {
        return Err(Error::Domain(format!("survival needs m >= 2, got {m}")));
    }
    let mut acc = F::one();
    for i in 1..m {
        let fi = F::from_usize(i).expect("i");
        acc = acc * ((fi - t) / (fi - t0));
    }
    Ok(acc)
}

/// Merge rate of any fixed k-tuple among b blocks: (k−2)!(b−k)!/(b−1)!.
pub fn coalescent_rate<F: Real>(b: usize, k: usize) -> Result<F> {
    if !(2 <= k && k <= b) {
        return Err(Error::Domain(format!(
            "coalescent rate needs 2 <= k <= b, got (b, k) = ({b}, {k})"
        )));
    }
    let ln = ln_factorial::<F>(k - 2) + ln_factorial::<F>(b - k) - ln_factorial::<F>(b - 1);
    Ok(ln.exp())
}

fn check_tagged_domain<F: Real>(t: F, q: F) -> Result<()> {
    check_time(t)?;
    if !(q > F::zero()) {
        return Err(Error::Domain(format!("moment order {q} must be positive")));
    }
    Ok(())
}

/// Laplace exponent derivative of the tagged fragment:
/// φ_t(q) = digamma(q+1−t) − digamma(1−t).
pub fn phi<F: Real>(t: F, q: F) -> Result<F> {
    check_tagged_domain(t, q)?;
    Ok((q + F::one() - t).digamma() - (F::one() - t).digamma())
}

/// Accumulated Laplace exponent ψ(t,q) = ln(Γ(1−t)Γ(q+1)/Γ(q+1−t)), so that
/// E[|Π₁(t)|^q] = exp(−ψ(t,q)).
pub fn psi<F: Real>(t: F, q: F) -> Result<F> {
    check_tagged_domain(t, q)?;
    Ok((F::one() - t).ln_gamma() + (q + F::one()).ln_gamma() - (q + F::one() - t).ln_gamma())
}

/// q-th moment of the tagged fragment frequency, which is Beta(1−t, t):
/// Γ(q+1−t)/(Γ(1−t)Γ(q+1)).
pub fn tagged_moment<F: Real>(t: F, q: F) -> Result<F> {
    check_tagged_domain(t, q)?;
    Ok(((q + F::one() - t).ln_gamma() - (F::one() - t).ln_gamma() - (q + F::one()).ln_gamma()).exp())
}

/// Jump rate under a deterministic time change: β'(u)·jump_rate(β(u), π).
pub fn time_changed_rate<F: Real>(
    u: F,
    pi: &SetPartition,
    beta_value: F,
    beta_derivative: F,
) -> Result<F> {
    if !u.is_finite() {
        return Err(Error::InvalidArgument(format!("time {u} must be finite")));
    }
    if !(beta_derivative > F::zero()) {
        return Err(Error::Domain(format!(
            "time-change speed {beta_derivative} must be positive"
        )));
    }
    Ok(beta_derivative * jump_rate(beta_value, pi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integrate_gl;

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn sp(blocks: &[&[usize]]) -> SetPartition {
        SetPartition::from_blocks(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    const T_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

    #[test]
    fn rising_basics() {
        assert_eq!(rising(3.7f64, 0), 1.0);
        assert_eq!(rising(1.0f64, 5), 120.0);
        assert!((rising(-0.5f64, 2) + 0.25).abs() < 1e-15);
        let (sign, ln) = rising_signed_ln(-0.5f64, 2);
        assert_eq!(sign, -1);
        assert!((ln - 0.25f64.ln()).abs() < 1e-14);
        assert_eq!(rising_signed_ln(-2.0f64, 4).0, 0);
    }

    #[test]
    fn params_reject_outside_both_domains() {
        assert!(PdParams::new(0.5f64, -0.6).is_err());
        assert!(PdParams::new(1.0f64, 0.5).is_err());
        assert!(PdParams::new(-0.1f64, 0.5).is_err());
        assert!(PdParams::new(0.0f64, 0.0).is_err());
        assert_eq!(
            PdParams::new(0.5f64, -0.5).unwrap().domain(),
            ParamDomain::Dislocation
        );
        assert_eq!(
            PdParams::new(0.7f64, -0.3).unwrap().domain(),
            ParamDomain::Proper
        );
    }

    #[test]
    fn eppf_pd_matches_two_step_seating_oracle() {
        // Second element starts a new block with probability (θ+α)/(1+θ).
        for &(alpha, theta) in &[(0.5f64, 0.5), (0.3, 1.0), (0.7, -0.3), (0.0, 2.0), (0.9, 0.0)] {
            let p = PdParams::new(alpha, theta).unwrap();
            let separate = eppf_pd(&p, &comp(&[1, 1])).unwrap();
            let together = eppf_pd(&p, &comp(&[2])).unwrap();
            assert!((separate - (theta + alpha) / (1.0 + theta)).abs() < 1e-14);
            assert!((separate + together - 1.0).abs() < 1e-14);
        }
        let p = PdParams::new(0.5f64, 0.5).unwrap();
        assert!((eppf_pd(&p, &comp(&[1, 1])).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn eppf_pd_theta_zero_closed_form() {
        let p = PdParams::new(0.5f64, 0.0).unwrap();
        assert!((eppf_pd(&p, &comp(&[2])).unwrap() - 0.5).abs() < 1e-15);
        for t in T_GRID {
            let p = PdParams::new(t, 0.0).unwrap();
            for parts in [vec![3], vec![1, 2], vec![1, 1, 1], vec![2, 2, 1]] {
                let c = comp(&parts);
                let a = eppf_pd(&p, &c).unwrap();
                let b = eppf_ruelle(t, &c).unwrap();
                assert!((a - b).abs() <= 1e-12 * b, "t={t} parts={parts:?}");
            }
        }
    }

    #[test]
    fn eppf_pd_ewens_case() {
        let p = PdParams::new(0.0f64, 1.0).unwrap();
        assert!((eppf_pd(&p, &comp(&[3])).unwrap() - 1.0 / 3.0).abs() < 1e-13);
        // All of P_3 under Ewens(1): uniform over the 3 one-vs-two splits.
        let total = eppf_pd(&p, &comp(&[3])).unwrap()
            + 3.0 * eppf_pd(&p, &comp(&[1, 2])).unwrap()
            + eppf_pd(&p, &comp(&[1, 1, 1])).unwrap();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn eppf_pd_rejects_dislocation_pair() {
        let p = PdParams::dislocation(0.5f64).unwrap();
        assert!(matches!(
            eppf_pd(&p, &comp(&[1, 1])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn eppf_ruelle_examples_and_symmetry() {
        assert!((eppf_ruelle(0.3f64, &comp(&[2])).unwrap() - 0.7).abs() < 1e-15);
        assert!((eppf_ruelle(0.3f64, &comp(&[1, 1])).unwrap() - 0.3).abs() < 1e-15);
        let a = eppf_ruelle(0.4f64, &comp(&[3, 1, 2])).unwrap();
        let b = eppf_ruelle(0.4f64, &comp(&[1, 2, 3])).unwrap();
        assert_eq!(a, b);
        assert!(eppf_ruelle(0.0f64, &comp(&[2])).is_err());
        assert!(eppf_ruelle(1.0f64, &comp(&[2])).is_err());
    }

    #[test]
    fn eppf_ruelle_normalizes_on_three_elements() {
        for t in T_GRID {
            let total = eppf_ruelle(t, &comp(&[3])).unwrap()
                + 3.0 * eppf_ruelle(t, &comp(&[1, 2])).unwrap()
                + eppf_ruelle(t, &comp(&[1, 1, 1])).unwrap();
            assert!((total - 1.0).abs() < 1e-14, "t = {t}");
        }
    }

    #[test]
    fn dislocation_examples() {
        assert!((eppf_dislocation(0.5f64, &comp(&[1, 1])).unwrap() - 1.0).abs() < 1e-14);
        assert!((eppf_dislocation(0.5f64, &comp(&[1, 2])).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        for t in T_GRID {
            let v = eppf_dislocation(t, &comp(&[1, 1])).unwrap();
            assert!((v - t / (1.0 - t)).abs() < 1e-12 * v.max(1.0));
        }
        assert!(matches!(
            eppf_dislocation(0.5f64, &comp(&[4])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn jump_rate_examples() {
        assert!((jump_rate(0.5f64, &sp(&[&[1], &[2]])).unwrap() - 2.0).abs() < 1e-14);
        assert!((jump_rate(0.5f64, &sp(&[&[1], &[2], &[3]])).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        assert!((jump_rate(0.5f64, &sp(&[&[1, 2], &[3]])).unwrap() - 2.0 / 3.0).abs() < 1e-14);
        assert!(jump_rate(0.5f64, &sp(&[&[1, 2, 3]])).is_err());
    }

    #[test]
    fn jump_rate_agrees_with_scaled_dislocation() {
        // Same quantity assembled through two different factorizations.
        let partitions: Vec<SetPartition> = vec![
            sp(&[&[1], &[2, 3, 4]]),
            sp(&[&[1, 3], &[2, 4]]),
            sp(&[&[1], &[2], &[3, 4]]),
            sp(&[&[1], &[2], &[3], &[4]]),
            sp(&[&[1, 2, 3], &[4, 5]]),
        ];
        for t in T_GRID {
            for pi in &partitions {
                let direct = jump_rate(t, pi).unwrap();
                let via_measure =
                    eppf_dislocation(t, &Composition::from_partition(pi)).unwrap() / t;
                assert!(
                    (direct - via_measure).abs() <= 1e-12 * via_measure,
                    "t = {t}, pi = {pi}"
                );
            }
        }
    }

    #[test]
    fn erosion_rate_identity_to_large_n() {
        // Rate of splitting off one element is 1/(n-1-t): it vanishes as
        // n grows, so the continuum process has no erosion component. The
        // closed form makes 1/(n-1-t) < 1e-3 for every t in (0,1) exactly
        // from n = 1002 on (at n = 1001 it is 1/(1000-t), a hair above).
        for t in [0.1f64, 0.5, 0.9] {
            let mut last = f64::INFINITY;
            for n in [2usize, 3, 5, 10, 100, 500, 1000, 1001, 1002] {
                let mut blocks = vec![vec![1]];
                blocks.push((2..=n).collect());
                let pi = SetPartition::new(n, blocks).unwrap();
                let rate = jump_rate(t, &pi).unwrap();
                let exact = 1.0 / (n as f64 - 1.0 - t);
                assert!((rate - exact).abs() <= 1e-12 * exact, "n = {n}, t = {t}");
                assert!(rate < last);
                last = rate;
            }
            assert!(last < 1e-3);
        }
    }

    #[test]
    fn large_balanced_shapes_stay_finite_in_log_space() {
        let pi = SetPartition::new(
            1000,
            vec![(1..=500).collect(), (501..=1000).collect()],
        )
        .unwrap();
        let rate = jump_rate(0.5f64, &pi).unwrap();
        assert!(rate > 0.0 && rate.is_finite());
        // Value is astronomically small; the log form must not round to zero
        // until well past f64's subnormal range.
        assert!(rate < 1e-200);
    }

    #[test]
    fn split_rate_examples_and_enumeration() {
        assert!((split_rate(0.5f64, 2).unwrap() - 2.0).abs() < 1e-15);
        assert!((split_rate(0.5f64, 3).unwrap() - 8.0 / 3.0).abs() < 1e-14);
        assert!(split_rate(0.5f64, 1).is_err());
        // Brute force over the four nontrivial partitions of [3].
        for t in T_GRID {
            let total = 3.0 * jump_rate(t, &sp(&[&[1, 2], &[3]])).unwrap()
                + jump_rate(t, &sp(&[&[1], &[2], &[3]])).unwrap();
            assert!((total - split_rate(t, 3).unwrap()).abs() < 1e-13, "t = {t}");
        }
        // Monotone in t and in m.
        assert!(split_rate(0.6f64, 4).unwrap() > split_rate(0.4f64, 4).unwrap());
        assert!(split_rate(0.5f64, 5).unwrap() > split_rate(0.5f64, 4).unwrap());
    }

    #[test]
    fn survival_examples() {
        assert!((survival(0.0f64, 0.5, 2).unwrap() - 0.5).abs() < 1e-15);
        assert!((survival(0.0f64, 0.5, 3).unwrap() - 0.375).abs() < 1e-15);
        assert_eq!(survival(0.3f64, 0.3, 7).unwrap(), 1.0);
        assert!(survival(0.5f64, 0.3, 2).is_err());
        assert!(survival(-0.1f64, 0.3, 2).is_err());
    }

    #[test]
    fn survival_matches_integrated_hazard() {
        for &(t0, t, m) in &[(0.0, 0.5, 2), (0.1, 0.8, 5), (0.3, 0.9, 12)] {
            let direct: f64 = survival(t0, t, m).unwrap();
            let hazard = integrate_gl(|u: f64| split_rate(u, m).unwrap(), t0, t, 64);
            assert!((direct - (-hazard).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn coalescent_rate_examples_and_integral_form() {
        assert!((coalescent_rate::<f64>(2, 2).unwrap() - 1.0).abs() < 1e-14);
        assert!((coalescent_rate::<f64>(3, 2).unwrap() - 0.5).abs() < 1e-14);
        assert!((coalescent_rate::<f64>(3, 3).unwrap() - 0.5).abs() < 1e-14);
        assert!((coalescent_rate::<f64>(4, 3).unwrap() - 1.0 / 6.0).abs() < 1e-14);
        assert!(coalescent_rate::<f64>(3, 4).is_err());
        assert!(coalescent_rate::<f64>(3, 1).is_err());
        for b in 2usize..=12 {
            for k in 2..=b {
                let direct: f64 = coalescent_rate(b, k).unwrap();
                let integral = integrate_gl(
                    |x: f64| x.powi(k as i32 - 2) * (1.0 - x).powi((b - k) as i32),
                    0.0,
                    1.0,
                    64,
                );
                assert!((direct - integral).abs() <= 1e-12 * direct, "b={b} k={k}");
            }
        }
    }

    #[test]
    fn phi_examples_and_integer_recovery() {
        assert!((phi(0.5f64, 1.0).unwrap() - 2.0).abs() < 1e-12);
        for t in T_GRID {
            for q in 1usize..=6 {
                let direct = phi(t, q as f64).unwrap();
                let series: f64 = (1..=q).map(|i| 1.0 / (i as f64 - t)).sum();
                assert!(
                    (direct - series).abs() <= 1e-12 * series,
                    "t = {t}, q = {q}"
                );
            }
        }
    }

    #[test]
    fn psi_examples_and_quadrature_identity() {
        assert!(((-psi(0.5f64, 2.0).unwrap()).exp() - 0.375).abs() < 1e-13);
        assert!(psi(1e-12f64, 3.0).unwrap().abs() < 1e-10);
        for &(t, q) in &[(0.3, 1.0), (0.5, 2.5), (0.9, 0.7)] {
            let direct: f64 = psi(t, q).unwrap();
            let integral = integrate_gl(|u: f64| phi(u.max(1e-300), q).unwrap(), 0.0, t, 64);
            assert!((direct - integral).abs() < 1e-8, "t = {t}, q = {q}");
        }
    }

    #[test]
    fn tagged_moment_examples() {
        assert!((tagged_moment(0.5f64, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((tagged_moment(0.5f64, 2.0).unwrap() - 0.375).abs() < 1e-14);
        assert!((tagged_moment(1e-12f64, 5.0).unwrap() - 1.0).abs() < 1e-10);
        for t in T_GRID {
            for q in [0.5f64, 1.0, 2.0, 3.0, 7.5] {
                let m = tagged_moment(t, q).unwrap();
                let via_psi = (-psi(t, q).unwrap()).exp();
                assert!((m - via_psi).abs() <= 1e-12 * m);
            }
            // Product form for integer orders.
            let m3 = tagged_moment(t, 3.0).unwrap();
            let product: f64 = (1..=3).map(|i| (i as f64 - t) / i as f64).product();
            assert!((m3 - product).abs() <= 1e-12 * product);
        }
        // Decreasing in q and t.
        assert!(tagged_moment(0.5f64, 2.0).unwrap() < tagged_moment(0.5f64, 1.0).unwrap());
        assert!(tagged_moment(0.7f64, 2.0).unwrap() < tagged_moment(0.3f64, 2.0).unwrap());
    }

    #[test]
    fn time_change_identity_and_scaling() {
        let pi = sp(&[&[1], &[2, 3]]);
        let t = 0.4f64;
        let base = jump_rate(t, &pi).unwrap();
        assert_eq!(time_changed_rate(t, &pi, t, 1.0).unwrap(), base);
        assert!((time_changed_rate(0.2f64, &pi, 0.4, 2.0).unwrap() - 2.0 * base).abs() < 1e-15);
        // Coalescent clock: β(u) = e^{−u} enters through |β'| = e^{−u}.
        let u = 0.9f64;
        let scaled = time_changed_rate(u, &pi, (-u).exp(), (-u).exp()).unwrap();
        assert!((scaled - (-u).exp() * jump_rate((-u).exp(), &pi).unwrap()).abs() < 1e-15);
        assert!(time_changed_rate(0.1f64, &pi, 0.4, 0.0).is_err());
    }
}
