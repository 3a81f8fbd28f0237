//! Exact threshold functions and Ackermann-hierarchy bound checks.
//!
//! Every quantity is an [`ExactRational`] or a [`BigNatural`]; nothing here
//! touches floating point. The threshold tower is
//!
//! * `sigma(θ, ε, k) = ⌈k(k−1) / (2(ε^k − θ^k))⌉`,
//! * `t_bound(ε, m) = (2/ε′)·sigma(ε′/4, ε′/2, m_k)`,
//! * `q_bound(θ, ε, r, m) = t_bound((1/8)((ε−θ)/2^r)², m)`,
//! * `v_delta`, the maximum of the above over dyadic density grids,
//! * `f_chain`, the sizes obtained by feeding `v_delta` its own ceilings.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::rational::{ceil_log2, BigNatural, ExactRational};
use crate::{Budget, Error, Result};

/// Logarithm base used for `p_ε = ⌈log(1/ε)⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LogBase {
    Two,
    Natural,
}

/// Denotes `A_2^{(iterations)}(argument)` without materializing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerRef {
    pub iterations: u64,
    #[serde(serialize_with = "crate::rational::serialize_decimal")]
    pub argument: BigNatural,
}

impl TowerRef {
    pub fn new(iterations: u64, argument: impl Into<BigNatural>) -> Self {
        TowerRef {
            iterations,
            argument: argument.into(),
        }
    }
}

impl std::fmt::Display for TowerRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "A_2^({})({})", self.iterations, self.argument)
    }
}

/// Evaluator for the threshold tower.
#[derive(Debug, Clone)]
pub struct Bounds {
    pub budget: Budget,
    /// Use the monotonicity of `t_bound` in its density to skip most of the
    /// dyadic grid in [`Bounds::v_delta`].
    pub prune: bool,
    pub log_base: LogBase,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            budget: Budget::default(),
            prune: true,
            log_base: LogBase::Two,
        }
    }
}

fn check_unit_density(name: &str, x: &ExactRational) -> Result<()> {
    if x.is_zero() || x > &ExactRational::one() {
        return Err(Error::domain(format!("{name} = {x} must lie in (0, 1]")));
    }
    Ok(())
}

fn check_targets(targets: &[u64]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::domain("empty target sequence"));
    }
    if targets.contains(&0) {
        return Err(Error::domain("targets must be positive"));
    }
    if *targets.last().unwrap() < 2 {
        return Err(Error::domain("the final target must be at least 2"));
    }
    Ok(())
}

fn product(xs: &[u64]) -> BigUint {
    xs.iter().fold(BigUint::one(), |acc, &m| acc * m)
}

/// `∏_{q<k} m_q` and `Σ_{j<k} ∏_{q=j}^{k−1} m_q` for `k = targets.len() − 1`.
fn prefix_products(targets: &[u64]) -> (BigUint, BigUint) {
    let k = targets.len() - 1;
    let pm = product(&targets[..k]);
    let mut spm = BigUint::zero();
    let mut suffix = BigUint::one();
    for &m in targets[..k].iter().rev() {
        suffix *= m;
        spm += &suffix;
    }
    (pm, spm)
}

fn as_shift(x: &BigUint, budget: &Budget) -> Result<i64> {
    x.to_i64()
        .filter(|&s| (s as u64) <= budget.max_bits)
        .ok_or_else(|| {
            Error::budget(format!(
                "a power of two 2^{x} exceeds {} bits",
                budget.max_bits
            ))
        })
}

/// Minimal `s` with `2^{1−s} ≤ δ`.
pub fn s_delta(delta: &ExactRational) -> Result<u64> {
    check_unit_density("delta", delta)?;
    let two = ExactRational::from(2);
    let mut scaled = delta.clone();
    let mut s = 0;
    while scaled < two {
        scaled = &scaled * &two;
        s += 1;
    }
    Ok(s)
}

/// `Δ_s = {i/2^s : 0 < i ≤ 2^s}` in increasing order.
pub fn dyadic_grid(s: u32) -> Vec<ExactRational> {
    let den = BigUint::one() << s as usize;
    let count = 1u64 << s;
    (1..=count)
        .map(|i| ExactRational::new(i, den.clone()).expect("nonzero"))
        .collect()
}

/// Whether `v ≤ A_2^{(t.iterations)}(t.argument)`, by repeated ceiling-log reduction.
pub fn leq_tower(v: &BigNatural, t: &TowerRef) -> bool {
    let mut v = v.clone();
    for _ in 0..t.iterations {
        // 2^y ≥ 1 for every y.
        if v <= BigUint::one() {
            return true;
        }
        v = BigUint::from(ceil_log2(&v));
    }
    v <= t.argument
}

impl Bounds {
    pub fn with_budget(budget: Budget) -> Self {
        Bounds {
            budget,
            ..Default::default()
        }
    }

    pub fn sigma(&self, theta: &ExactRational, eps: &ExactRational, k: u64) -> Result<BigNatural> {
        if theta.is_zero() || theta >= eps || eps > &ExactRational::one() {
            return Err(Error::domain(format!(
                "sigma requires 0 < theta < eps <= 1, got theta={theta}, eps={eps}"
            )));
        }
        if k < 2 {
            return Err(Error::domain(format!("sigma requires k >= 2, got {k}")));
        }
        let kb = BigUint::from(k);
        let gap = eps
            .pow_checked(&kb, &self.budget)?
            .checked_sub(&theta.pow_checked(&kb, &self.budget)?)
            .expect("theta < eps");
        let numer = ExactRational::from(k * (k - 1));
        let value = numer / (&ExactRational::from(2) * &gap);
        Ok(value.ceil())
    }

    /// `ε′` attached to the final coordinate of `targets`.
    pub fn eps_prime(&self, eps: &ExactRational, targets: &[u64]) -> Result<ExactRational> {
        check_unit_density("eps", eps)?;
        if targets.is_empty() {
            return Err(Error::domain("empty target sequence"));
        }
        if targets.contains(&0) {
            return Err(Error::domain("targets must be positive"));
        }
        if targets.len() == 1 {
            return Ok(eps.clone());
        }
        let (pm, spm) = prefix_products(targets);
        let shift = as_shift(&(spm * 2u32), &self.budget)?;
        eps.pow_checked(&pm, &self.budget)?
            .mul_pow2(-shift, &self.budget)
    }

    pub fn t_bound(&self, eps: &ExactRational, targets: &[u64]) -> Result<ExactRational> {
        check_unit_density("eps", eps)?;
        check_targets(targets)?;
        let ep = self.eps_prime(eps, targets)?;
        let quarter = ep.mul_pow2(-2, &self.budget)?;
        let half = ep.mul_pow2(-1, &self.budget)?;
        let sigma = self.sigma(&quarter, &half, *targets.last().unwrap())?;
        Ok(ExactRational::from(2) / ep * ExactRational::from(sigma))
    }

    /// Density index `(1/8)((ε−θ)/2^r)²` at which `q_bound` evaluates `t_bound`.
    pub fn q_index(
        &self,
        theta: &ExactRational,
        eps: &ExactRational,
        r: &BigNatural,
    ) -> Result<ExactRational> {
        if theta.is_zero() || theta >= eps || eps > &ExactRational::one() {
            return Err(Error::domain(format!(
                "q_bound requires 0 < theta < eps <= 1, got theta={theta}, eps={eps}"
            )));
        }
        if r.is_zero() {
            return Err(Error::domain("q_bound requires r >= 1"));
        }
        let gap = eps.checked_sub(theta).expect("theta < eps");
        let shift = as_shift(&(r * 2u32 + 3u32), &self.budget)?;
        (&gap * &gap).mul_pow2(-shift, &self.budget)
    }

    pub fn q_bound(
        &self,
        theta: &ExactRational,
        eps: &ExactRational,
        r: &BigNatural,
        targets: &[u64],
    ) -> Result<ExactRational> {
        let index = self.q_index(theta, eps, r)?;
        self.t_bound(&index, targets)
    }

    /// `V_δ(targets, sizes)` where `sizes` holds `n_0, …, n_{k−1}`.
    pub fn v_delta(
        &self,
        delta: &ExactRational,
        targets: &[u64],
        sizes: &[BigNatural],
    ) -> Result<ExactRational> {
        check_targets(targets)?;
        let k = targets.len() - 1;
        if sizes.len() != k {
            return Err(Error::domain(format!(
                "v_delta expects {k} sizes for {} targets, got {}",
                targets.len(),
                sizes.len()
            )));
        }
        if sizes.iter().any(Zero::is_zero) {
            return Err(Error::domain("sizes must be positive"));
        }
        let s = s_delta(delta)?;
        let min_coarse = ExactRational::one().mul_pow2(-(s as i64), &self.budget)?;
        if k == 0 {
            if self.prune {
                return self.t_bound(&min_coarse, targets);
            }
            return self.max_over(dyadic_grid(self.grid_exponent(s)?), |e| {
                self.t_bound(&e, targets)
            });
        }

        let mut best = self.t_bound(&min_coarse, targets)?;
        let fine = self.grid_exponent(s + k as u64)?;
        let mut r = BigUint::one();
        for i in 1..=k {
            r *= &sizes[i - 1];
            let tail = &targets[i..];
            let candidate = if self.prune {
                // Q depends on (θ, ε) only through ε − θ and decreases in it.
                let theta = ExactRational::one().mul_pow2(-(fine as i64), &self.budget)?;
                let eps = &theta * &ExactRational::from(2);
                self.q_bound(&theta, &eps, &r, tail)?
            } else {
                let grid = dyadic_grid(fine);
                let mut pairs = Vec::new();
                for (a, theta) in grid.iter().enumerate() {
                    for eps in &grid[a + 1..] {
                        pairs.push((theta, eps));
                    }
                }
                self.max_over(pairs, |(theta, eps)| self.q_bound(theta, eps, &r, tail))?
            };
            if candidate > best {
                best = candidate;
            }
        }
        Ok(best)
    }

    fn grid_exponent(&self, s: u64) -> Result<u32> {
        // Keep full-grid enumeration within the node budget.
        u32::try_from(s)
            .ok()
            .filter(|&s| s < 63 && (1u64 << s) <= self.budget.max_nodes)
            .ok_or_else(|| Error::budget(format!("dyadic grid Δ_{s} is too large")))
    }

    fn max_over<I, T, F>(&self, items: I, mut eval: F) -> Result<ExactRational>
    where
        I: IntoIterator<Item = T>,
        F: FnMut(T) -> Result<ExactRational>,
    {
        let mut best: Option<ExactRational> = None;
        for item in items {
            let v = eval(item)?;
            if best.as_ref().is_none_or(|b| &v > b) {
                best = Some(v);
            }
        }
        best.ok_or_else(|| Error::domain("maximum over an empty grid"))
    }

    /// `f` of every prefix of `targets`: each entry is `⌈V_δ⌉` fed the previous entries.
    pub fn f_chain(&self, delta: &ExactRational, targets: &[u64]) -> Result<Vec<BigNatural>> {
        check_targets(targets)?;
        if targets.iter().any(|&m| m < 2) {
            return Err(Error::domain("f_chain requires every target >= 2"));
        }
        let mut out: Vec<BigNatural> = Vec::with_capacity(targets.len());
        for j in 0..targets.len() {
            let v = self.v_delta(delta, &targets[..=j], &out)?;
            let f = v.ceil();
            if f.bits() > self.budget.max_bits {
                return Err(Error::budget(format!(
                    "f value exceeds {} bits",
                    self.budget.max_bits
                )));
            }
            out.push(f);
        }
        Ok(out)
    }

    /// `A_n(x)` of the Ackermann hierarchy.
    pub fn ackermann(&self, n: u64, x: &BigNatural) -> Result<BigNatural> {
        let limit = self.budget.max_bits;
        let over = || Error::budget(format!("A_{n}({x}) exceeds {limit} bits"));
        let value = match n {
            0 => match x.to_u64() {
                Some(0) => BigUint::one(),
                Some(1) => BigUint::from(2u32),
                _ => x + 2u32,
            },
            1 if x.is_zero() => BigUint::one(),
            1 => x << 1usize,
            _ => {
                // A_n(x) = A_{n-1}^{(x)}(1), and A_n(x) >= 2^x for n >= 2.
                let steps = x.to_u64().filter(|&s| s < limit).ok_or_else(over)?;
                let mut acc = BigUint::one();
                for _ in 0..steps {
                    acc = self.ackermann(n - 1, &acc)?;
                }
                acc
            }
        };
        if value.bits() > limit {
            return Err(over());
        }
        Ok(value)
    }

    /// `p_ε = ⌈log(1/ε)⌉` in the configured base.
    pub fn p_eps(&self, eps: &ExactRational) -> Result<u64> {
        check_unit_density("eps", eps)?;
        let inv = eps.recip()?;
        match self.log_base {
            LogBase::Two => {
                let mut p = 0;
                let mut pow = ExactRational::one();
                while pow < inv {
                    pow = &pow * &ExactRational::from(2);
                    p += 1;
                }
                Ok(p)
            }
            LogBase::Natural => Ok(ceil_ln(&inv)),
        }
    }

    /// Checks `T_ε(m) ≤ A_2(5·p_ε·∏m)`.
    pub fn check_t_tower(&self, eps: &ExactRational, targets: &[u64]) -> Result<TTowerCheck> {
        if eps > &ExactRational::frac(1, 2) {
            return Err(Error::domain(format!("eps = {eps} must be at most 1/2")));
        }
        if targets.is_empty() || targets.iter().any(|&m| m < 2) {
            return Err(Error::domain("targets must all be at least 2"));
        }
        let left = self.t_bound(eps, targets)?;
        let p = self.p_eps(eps)?;
        let exponent = product(targets) * (5 * p);
        let right = self.ackermann(2, &exponent)?;
        Ok(TTowerCheck {
            holds: left.ceil() <= right,
            left,
            right,
            p_eps: p,
        })
    }

    /// Checks `f(m_0..m_k) ≤ A_2^{(1+k)}(5·s_δ·∏m)` for every prefix.
    pub fn check_f_tower(&self, delta: &ExactRational, targets: &[u64]) -> Result<Vec<FTowerRow>> {
        if delta.is_zero() || delta > &ExactRational::frac(1, 2) {
            return Err(Error::domain(format!(
                "delta = {delta} must lie in (0, 1/2]"
            )));
        }
        if targets.is_empty() || targets.iter().any(|&m| m < 2) {
            return Err(Error::domain("targets must all be at least 2"));
        }
        let s = s_delta(delta)?;
        let fs = self.f_chain(delta, targets)?;
        Ok(fs
            .into_iter()
            .enumerate()
            .map(|(k, f)| {
                let tower = TowerRef::new(1 + k as u64, product(&targets[..=k]) * (5 * s));
                FTowerRow {
                    k,
                    holds: leq_tower(&f, &tower),
                    f,
                    tower,
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TTowerCheck {
    pub holds: bool,
    pub left: ExactRational,
    #[serde(serialize_with = "crate::rational::serialize_decimal")]
    pub right: BigNatural,
    pub p_eps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FTowerRow {
    pub k: usize,
    #[serde(serialize_with = "crate::rational::serialize_decimal")]
    pub f: BigNatural,
    pub tower: TowerRef,
    pub holds: bool,
}

/// Rational enclosure `[lo, hi]` of `e` from `terms` Taylor terms.
fn e_enclosure(terms: u64) -> (ExactRational, ExactRational) {
    let mut sum = ExactRational::zero();
    let mut fact = BigUint::one();
    for i in 0..=terms {
        if i > 0 {
            fact *= i;
        }
        sum = sum + ExactRational::new(1u32, fact.clone()).expect("nonzero");
    }
    // Tail Σ_{i>N} 1/i! < 1/(N!·N).
    let tail = ExactRational::new(1u32, fact * terms).expect("nonzero");
    let hi = &sum + &tail;
    (sum, hi)
}

/// `⌈ln x⌉` for rational `x ≥ 1`, decided exactly.
fn ceil_ln(x: &ExactRational) -> u64 {
    if x <= &ExactRational::one() {
        return 0;
    }
    // e^n is irrational for n ≥ 1, so every comparison below is eventually strict.
    let mut terms = 16;
    loop {
        let (lo, hi) = e_enclosure(terms);
        let mut n = 0u64;
        let mut lo_pow = ExactRational::one();
        let mut hi_pow = ExactRational::one();
        let decided = loop {
            n += 1;
            lo_pow = &lo_pow * &lo;
            hi_pow = &hi_pow * &hi;
            if &lo_pow >= x {
                break Some(n);
            }
            if &hi_pow >= x {
                break None;
            }
        };
        if let Some(n) = decided {
            return n;
        }
        terms *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u64, d: u64) -> ExactRational {
        ExactRational::frac(n, d)
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn sigma_examples() {
        let b = Bounds::default();
        assert_eq!(b.sigma(&q(1, 4), &q(1, 2), 2).unwrap(), big(6));
        assert_eq!(b.sigma(&q(1, 2), &q(1, 1), 2).unwrap(), big(2));
        assert!(matches!(
            b.sigma(&q(1, 2), &q(1, 2), 2),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            b.sigma(&q(1, 4), &q(1, 2), 1),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            b.sigma(&q(1, 4), &q(3, 2), 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn eps_prime_examples() {
        let b = Bounds::default();
        assert_eq!(b.eps_prime(&q(1, 2), &[2]).unwrap(), q(1, 2));
        assert_eq!(b.eps_prime(&q(1, 2), &[2, 2]).unwrap(), q(1, 64));
        assert_eq!(b.eps_prime(&q(1, 1), &[3, 2]).unwrap(), q(1, 64));
        assert!(b.eps_prime(&q(1, 2), &[]).is_err());
        assert!(b.eps_prime(&q(3, 2), &[2]).is_err());
    }

    #[test]
    fn t_bound_examples() {
        let b = Bounds::default();
        assert_eq!(b.t_bound(&q(1, 2), &[2]).unwrap(), q(88, 1));
        assert_eq!(b.t_bound(&q(1, 1), &[2]).unwrap(), q(12, 1));
        assert_eq!(b.t_bound(&q(1, 2), &[2, 2]).unwrap(), q(2_796_288, 1));
        assert_eq!(b.t_bound(&q(3, 4), &[2]).unwrap(), q(80, 3));
        assert!(b.t_bound(&q(1, 2), &[2, 1]).is_err());
    }

    #[test]
    fn q_bound_examples() {
        let b = Bounds::default();
        let r = big(1);
        let v = b.q_bound(&q(1, 4), &q(1, 2), &r, &[2]).unwrap();
        assert_eq!(v, q(1_431_656_448, 1));
        assert_eq!(v, b.t_bound(&q(1, 512), &[2]).unwrap());
        assert!(b.q_bound(&q(1, 2), &q(1, 2), &r, &[2]).is_err());
        assert!(b.q_bound(&q(1, 4), &q(1, 2), &big(0), &[2]).is_err());
    }

    #[test]
    fn s_delta_and_grid() {
        assert_eq!(s_delta(&q(1, 2)).unwrap(), 2);
        assert_eq!(s_delta(&q(1, 1)).unwrap(), 1);
        assert_eq!(s_delta(&q(1, 3)).unwrap(), 3);
        assert!(s_delta(&q(0, 1)).is_err());
        assert_eq!(dyadic_grid(0), vec![q(1, 1)]);
        assert_eq!(dyadic_grid(1), vec![q(1, 2), q(1, 1)]);
        assert_eq!(dyadic_grid(2), vec![q(1, 4), q(1, 2), q(3, 4), q(1, 1)]);
    }

    #[test]
    fn v_delta_examples() {
        let b = Bounds::default();
        assert_eq!(b.v_delta(&q(1, 2), &[2], &[]).unwrap(), q(688, 1));
        assert_eq!(b.v_delta(&q(1, 1), &[2], &[]).unwrap(), q(88, 1));
        assert!(b.v_delta(&q(1, 2), &[2, 2], &[]).is_err());
        let v = b.v_delta(&q(1, 2), &[2, 2], &[big(688)]).unwrap();
        assert!(v.is_integer());
        assert_eq!(v.numer().bits(), 4159);
        assert!(v > q(178_957_312, 1));
    }

    #[test]
    fn pruned_and_full_v_delta_agree() {
        let pruned = Bounds::default();
        let full = Bounds {
            prune: false,
            ..Default::default()
        };
        let cases: &[(ExactRational, &[u64], Vec<BigUint>)] = &[
            (q(1, 2), &[2], vec![]),
            (q(1, 1), &[3], vec![]),
            (q(1, 3), &[2], vec![]),
            (q(1, 2), &[2, 2], vec![big(688)]),
            (q(3, 4), &[2, 3], vec![big(5)]),
            (q(1, 1), &[2, 2, 2], vec![big(3), big(4)]),
        ];
        for (delta, targets, sizes) in cases {
            assert_eq!(
                pruned.v_delta(delta, targets, sizes).unwrap(),
                full.v_delta(delta, targets, sizes).unwrap(),
                "{delta:?} {targets:?}"
            );
        }
    }

    #[test]
    fn f_chain_examples() {
        let b = Bounds::default();
        assert_eq!(b.f_chain(&q(1, 2), &[2]).unwrap(), vec![big(688)]);
        let chain = b.f_chain(&q(1, 2), &[2, 2]).unwrap();
        assert_eq!(chain[0], big(688));
        assert_eq!(
            ExactRational::from(chain[1].clone()),
            b.v_delta(&q(1, 2), &[2, 2], &[big(688)]).unwrap()
        );
        // Outside the δ ≤ 1/2 regime plain evaluation still works.
        assert!(b.f_chain(&q(3, 4), &[2]).is_ok());
        assert!(matches!(
            b.check_f_tower(&q(3, 4), &[2]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn f_chain_third_prefix_exceeds_budget() {
        let b = Bounds::default();
        assert!(matches!(
            b.f_chain(&q(1, 2), &[2, 2, 2]),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn ackermann_examples() {
        let b = Bounds::default();
        assert_eq!(b.ackermann(0, &big(0)).unwrap(), big(1));
        assert_eq!(b.ackermann(0, &big(1)).unwrap(), big(2));
        assert_eq!(b.ackermann(0, &big(5)).unwrap(), big(7));
        assert_eq!(b.ackermann(2, &big(5)).unwrap(), big(32));
        assert_eq!(b.ackermann(3, &big(3)).unwrap(), big(16));
        assert_eq!(b.ackermann(3, &big(4)).unwrap(), big(65536));
        assert!(matches!(
            b.ackermann(3, &big(6)),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(matches!(
            b.ackermann(2, &big(1 << 21)),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn leq_tower_examples() {
        assert!(leq_tower(&big(1024), &TowerRef::new(1, 10u32)));
        assert!(!leq_tower(&big(1025), &TowerRef::new(1, 10u32)));
        assert!(leq_tower(&big(5), &TowerRef::new(0, 5u32)));
        assert!(!leq_tower(&big(6), &TowerRef::new(0, 5u32)));
        assert!(leq_tower(&big(1), &TowerRef::new(3, 0u32)));
        // A_2^(2)(2) = 16.
        assert!(leq_tower(&big(16), &TowerRef::new(2, 2u32)));
        assert!(!leq_tower(&big(17), &TowerRef::new(2, 2u32)));
    }

    #[test]
    fn p_eps_examples() {
        let b = Bounds::default();
        assert_eq!(b.p_eps(&q(1, 2)).unwrap(), 1);
        assert_eq!(b.p_eps(&q(1, 4)).unwrap(), 2);
        assert_eq!(b.p_eps(&q(1, 3)).unwrap(), 2);
        assert_eq!(b.p_eps(&q(1, 1)).unwrap(), 0);
        let ln = Bounds {
            log_base: LogBase::Natural,
            ..Default::default()
        };
        assert_eq!(ln.p_eps(&q(1, 2)).unwrap(), 1);
        assert_eq!(ln.p_eps(&q(1, 8)).unwrap(), 3);
        // e^2 ≈ 7.389 and e^3 ≈ 20.09.
        assert_eq!(ln.p_eps(&q(100, 739)).unwrap(), 3);
        assert_eq!(ln.p_eps(&q(100, 738)).unwrap(), 2);
        assert_eq!(ln.p_eps(&q(1, 20)).unwrap(), 3);
        assert_eq!(ln.p_eps(&q(1, 21)).unwrap(), 4);
    }

    #[test]
    fn t_tower_examples() {
        let b = Bounds::default();
        let c = b.check_t_tower(&q(1, 2), &[2]).unwrap();
        assert_eq!(
            (c.holds, c.left.clone(), c.right.clone()),
            (true, q(88, 1), big(1024))
        );
        let c = b.check_t_tower(&q(1, 4), &[2]).unwrap();
        assert_eq!(
            (c.holds, c.left.clone(), c.right.clone()),
            (true, q(688, 1), big(1 << 20))
        );
        // ε = 1/2 lies outside the ε ≤ δ/2 ≤ 1/4 regime; the inequality fails there.
        let c = b.check_t_tower(&q(1, 2), &[2, 2]).unwrap();
        assert_eq!(c.left, q(2_796_288, 1));
        assert_eq!(c.right, big(1 << 20));
        assert!(!c.holds);
    }

    #[test]
    fn f_tower_examples() {
        let b = Bounds::default();
        let rows = b.check_f_tower(&q(1, 2), &[2]).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].holds);
        assert_eq!(rows[0].tower, TowerRef::new(1, 20u32));
        let rows = b.check_f_tower(&q(1, 2), &[2, 2]).unwrap();
        assert!(rows.iter().all(|r| r.holds));
        assert_eq!(rows[1].tower, TowerRef::new(2, 40u32));
        let rows = b.check_f_tower(&q(1, 4), &[3]).unwrap();
        assert_eq!(rows[0].f, big(224_704));
        assert!(rows[0].holds);
    }
}
