//! Finding `k` events whose common intersection is still large.
//!
//! Given events `A_1, …, A_N` of measure at least `ε` and `N ≥ sigma(θ, ε, k)`,
//! some `k` of them intersect in measure at least `θ^k`. The search here does
//! not reproduce the averaging argument behind that fact; it looks for the
//! subset directly, either exhaustively (complete, lexicographically least
//! answer) or greedily (fast, sound, incomplete).
//!
//! Event indices are zero-based.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::grid::BitSet;
use crate::{Budget, Error, ExactRational, NodeCounter, PointSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Greedy,
}

#[derive(Debug, Clone)]
enum Measure {
    Uniform,
    /// Point weights scaled to integers over a common denominator.
    Weighted {
        units: Vec<BigUint>,
        total: BigUint,
    },
}

/// Events over a finite probability space `Ω = {0, …, ground − 1}`.
#[derive(Debug, Clone)]
pub struct EventFamily {
    ground: usize,
    measure: Measure,
    events: Vec<BitSet>,
}

impl EventFamily {
    /// Events given as member lists over a uniformly weighted ground set.
    pub fn uniform(ground: usize, events: &[Vec<usize>]) -> Result<Self> {
        if ground == 0 {
            return Err(Error::domain("empty ground set"));
        }
        let events = events
            .iter()
            .enumerate()
            .map(|(i, members)| {
                let mut b = BitSet::new(ground);
                for &x in members {
                    if x >= ground {
                        return Err(Error::domain(format!("event {i} has point {x} outside Ω")));
                    }
                    b.set(x);
                }
                Ok(b)
            })
            .collect::<Result<_>>()?;
        Ok(EventFamily {
            ground,
            measure: Measure::Uniform,
            events,
        })
    }

    /// Point sets over a common shape, each cell weighted equally.
    pub fn from_point_sets<'a>(sets: impl IntoIterator<Item = &'a PointSet>) -> Result<Self> {
        let mut shape = None;
        let mut events = Vec::new();
        for s in sets {
            match &shape {
                None => shape = Some(s.shape().clone()),
                Some(sh) if sh != s.shape() => {
                    return Err(Error::domain("events over different shapes"))
                }
                _ => {}
            }
            events.push(s.bits().clone());
        }
        let ground = shape.map_or(1, |s| s.cells());
        Ok(EventFamily {
            ground,
            measure: Measure::Uniform,
            events,
        })
    }

    /// Replaces the uniform measure by explicit point weights summing to 1.
    pub fn with_weights(self, weights: &[ExactRational]) -> Result<Self> {
        if weights.len() != self.ground {
            return Err(Error::domain(format!(
                "expected {} weights, got {}",
                self.ground,
                weights.len()
            )));
        }
        let total = weights
            .iter()
            .fold(BigUint::one(), |acc, w| acc.lcm(w.denom()));
        let units: Vec<BigUint> = weights
            .iter()
            .map(|w| w.numer() * (&total / w.denom()))
            .collect();
        let sum = units.iter().fold(BigUint::zero(), |acc, u| acc + u);
        if sum != total {
            return Err(Error::domain("weights do not sum to 1"));
        }
        Ok(EventFamily {
            measure: Measure::Weighted { units, total },
            ..self
        })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    fn total(&self) -> BigUint {
        match &self.measure {
            Measure::Uniform => BigUint::from(self.ground),
            Measure::Weighted { total, .. } => total.clone(),
        }
    }

    fn units(&self, b: &BitSet) -> BigUint {
        match &self.measure {
            Measure::Uniform => BigUint::from(b.count()),
            Measure::Weighted { units, .. } => {
                b.ones().fold(BigUint::zero(), |acc, i| acc + &units[i])
            }
        }
    }

    fn units_and(&self, a: &BitSet, b: &BitSet) -> BigUint {
        match &self.measure {
            Measure::Uniform => BigUint::from(a.and_count(b)),
            Measure::Weighted { .. } => self.units(&a.and(b)),
        }
    }

    fn to_measure(&self, units: BigUint) -> ExactRational {
        ExactRational::new(units, self.total()).expect("positive total")
    }

    pub fn measure_of(&self, i: usize) -> Result<ExactRational> {
        let e = self
            .events
            .get(i)
            .ok_or_else(|| Error::domain(format!("event index {i} out of range")))?;
        Ok(self.to_measure(self.units(e)))
    }

    fn check_indices(&self, set: &[usize]) -> Result<()> {
        if set.is_empty() {
            return Err(Error::domain("empty index set"));
        }
        if let Some(&i) = set.iter().find(|&&i| i >= self.events.len()) {
            return Err(Error::domain(format!("event index {i} out of range")));
        }
        Ok(())
    }

    fn intersect(&self, set: &[usize]) -> BitSet {
        let mut acc = self.events[set[0]].clone();
        for &i in &set[1..] {
            acc = acc.and(&self.events[i]);
        }
        acc
    }

    /// `μ(⋂_{i∈F} A_i)`.
    pub fn intersection_measure(&self, set: &[usize]) -> Result<ExactRational> {
        self.check_indices(set)?;
        Ok(self.to_measure(self.units(&self.intersect(set))))
    }

    /// Smallest unit count `u` with `u / total ≥ θ^k`.
    fn threshold_units(&self, theta: &ExactRational, k: usize, budget: &Budget) -> Result<BigUint> {
        let power = theta.pow_checked(&BigUint::from(k), budget)?;
        Ok((power * ExactRational::from(self.total())).ceil())
    }
}

/// Finds `F` with `|F| = k` and `μ(⋂_{i∈F} A_i) ≥ θ^k`.
///
/// Exhaustive mode returns the lexicographically least such `F` or
/// `NotFound`; greedy mode may miss solutions but never returns a wrong one.
pub fn find_correlated(
    fam: &EventFamily,
    k: usize,
    theta: &ExactRational,
    mode: SearchMode,
    budget: &Budget,
) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    if k > fam.len() {
        return Err(Error::not_found(format!(
            "only {} events, cannot choose {k}",
            fam.len()
        )));
    }
    let need = fam.threshold_units(theta, k, budget)?;
    let found = match mode {
        SearchMode::Exhaustive => exhaustive(fam, k, &need, budget)?,
        SearchMode::Greedy if k == 1 => exhaustive(fam, 1, &need, budget)?,
        SearchMode::Greedy => greedy(fam, k, &need),
    };
    let set = found.ok_or_else(|| {
        Error::not_found(format!("no {k} events intersect in measure >= {theta}^{k}"))
    })?;
    debug_assert!(fam.units(&fam.intersect(&set)) >= need);
    Ok(set)
}

fn exhaustive(
    fam: &EventFamily,
    k: usize,
    need: &BigUint,
    budget: &Budget,
) -> Result<Option<Vec<usize>>> {
    fn dfs(
        fam: &EventFamily,
        k: usize,
        need: &BigUint,
        from: usize,
        acc: Option<&BitSet>,
        chosen: &mut Vec<usize>,
        nodes: &mut NodeCounter,
    ) -> Result<bool> {
        let remaining = k - chosen.len();
        for i in from..=fam.len() - remaining {
            nodes.tick()?;
            let next = match acc {
                Some(a) => a.and(&fam.events[i]),
                None => fam.events[i].clone(),
            };
            // Intersections only shrink, so a light partial intersection is hopeless.
            if &fam.units(&next) < need {
                continue;
            }
            chosen.push(i);
            if remaining == 1 || dfs(fam, k, need, i + 1, Some(&next), chosen, nodes)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }

    let mut nodes = NodeCounter::new(budget);
    let mut chosen = Vec::with_capacity(k);
    Ok(dfs(fam, k, need, 0, None, &mut chosen, &mut nodes)?.then_some(chosen))
}

fn greedy(fam: &EventFamily, k: usize, need: &BigUint) -> Option<Vec<usize>> {
    let n = fam.len();
    let mut best: Option<(BigUint, usize, usize)> = None;
    for i in 0..n {
        for j in i + 1..n {
            let u = fam.units_and(&fam.events[i], &fam.events[j]);
            if best.as_ref().is_none_or(|(b, _, _)| &u > b) {
                best = Some((u, i, j));
            }
        }
    }
    let (_, i, j) = best?;
    let mut chosen = vec![i, j];
    let mut acc = fam.events[i].and(&fam.events[j]);
    while chosen.len() < k {
        let mut pick: Option<(BigUint, usize)> = None;
        for c in (0..n).filter(|c| !chosen.contains(c)) {
            let u = fam.units_and(&acc, &fam.events[c]);
            if pick.as_ref().is_none_or(|(b, _)| &u > b) {
                pick = Some((u, c));
            }
        }
        let (_, c) = pick?;
        acc = acc.and(&fam.events[c]);
        chosen.push(c);
    }
    chosen.sort_unstable();
    (&fam.units(&acc) >= need).then_some(chosen)
}

/// The `k`-subset maximizing `μ(⋂ A_i)`, lexicographically least among ties.
pub fn best_correlated(
    fam: &EventFamily,
    k: usize,
    budget: &Budget,
) -> Result<(Vec<usize>, ExactRational)> {
    let n = fam.len();
    if k == 0 || k > n {
        return Err(Error::domain(format!("cannot choose {k} of {n} events")));
    }
    let subsets = binomial(n, k);
    if subsets.to_u64().is_none_or(|s| s > budget.max_nodes) {
        return Err(Error::budget(format!(
            "C({n}, {k}) subsets exceed the node budget"
        )));
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut best: Option<(BigUint, Vec<usize>)> = None;
    loop {
        let u = fam.units(&fam.intersect(&idx));
        if best.as_ref().is_none_or(|(b, _)| &u > b) {
            best = Some((u, idx.clone()));
        }
        // Next k-subset in lexicographic order.
        let Some(p) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            break;
        };
        idx[p] += 1;
        for q in p + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    let (u, set) = best.expect("at least one subset");
    Ok((set, fam.to_measure(u)))
}

fn binomial(n: usize, k: usize) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: u64, d: u64) -> ExactRational {
        ExactRational::frac(n, d)
    }

    #[test]
    fn intersection_measure_examples() {
        let fam = EventFamily::uniform(4, &[vec![0, 1], vec![2, 3], vec![0, 1, 2]]).unwrap();
        assert_eq!(fam.intersection_measure(&[2]).unwrap(), q(3, 4));
        assert_eq!(fam.intersection_measure(&[0, 1]).unwrap(), q(0, 1));
        assert_eq!(fam.intersection_measure(&[0, 2]).unwrap(), q(1, 2));
        assert!(fam.intersection_measure(&[]).is_err());
        assert!(fam.intersection_measure(&[3]).is_err());
    }

    #[test]
    fn identical_events_pair() {
        let fam = EventFamily::uniform(4, &[vec![0, 1], vec![0, 1]]).unwrap();
        let b = Budget::default();
        for mode in [SearchMode::Exhaustive, SearchMode::Greedy] {
            assert_eq!(
                find_correlated(&fam, 2, &q(1, 4), mode, &b).unwrap(),
                vec![0, 1]
            );
        }
    }

    #[test]
    fn full_events_give_first_indices() {
        let fam = EventFamily::uniform(3, &vec![vec![0, 1, 2]; 6]).unwrap();
        let b = Budget::default();
        for k in 1..=6 {
            let f = find_correlated(&fam, k, &q(9, 10), SearchMode::Exhaustive, &b).unwrap();
            assert_eq!(f, (0..k).collect::<Vec<_>>());
        }
    }

    #[test]
    fn k_one_returns_first_heavy_event() {
        let fam = EventFamily::uniform(4, &[vec![0], vec![0, 1, 2], vec![0, 1, 2, 3]]).unwrap();
        let f = find_correlated(
            &fam,
            1,
            &q(1, 2),
            SearchMode::Exhaustive,
            &Budget::default(),
        );
        assert_eq!(f.unwrap(), vec![1]);
    }

    #[test]
    fn not_found_when_disjoint() {
        let fam = EventFamily::uniform(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let r = find_correlated(
            &fam,
            2,
            &q(1, 4),
            SearchMode::Exhaustive,
            &Budget::default(),
        );
        assert!(matches!(r, Err(Error::NotFound(_))));
        let r = find_correlated(
            &fam,
            3,
            &q(1, 4),
            SearchMode::Exhaustive,
            &Budget::default(),
        );
        assert!(matches!(r, Err(Error::NotFound(_))));
    }

    #[test]
    fn node_budget_is_enforced() {
        let fam = EventFamily::uniform(2, &vec![vec![0]; 30]).unwrap();
        let b = Budget::default().with_nodes(10);
        let r = find_correlated(&fam, 3, &q(9, 10), SearchMode::Exhaustive, &b);
        assert!(matches!(r, Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn nested_events_best_pair() {
        let fam = EventFamily::uniform(8, &[(0..6).collect(), (0..4).collect(), (0..2).collect()])
            .unwrap();
        let (set, mu) = best_correlated(&fam, 2, &Budget::default()).unwrap();
        assert_eq!(set, vec![0, 1]);
        assert_eq!(mu, q(1, 2));
    }

    #[test]
    fn identical_events_best_is_first() {
        let fam = EventFamily::uniform(4, &vec![vec![1, 2]; 5]).unwrap();
        let (set, mu) = best_correlated(&fam, 3, &Budget::default()).unwrap();
        assert_eq!(set, vec![0, 1, 2]);
        assert_eq!(mu, q(1, 2));
    }

    #[test]
    fn weighted_measure() {
        let fam = EventFamily::uniform(3, &[vec![0], vec![0, 1], vec![1, 2]])
            .unwrap()
            .with_weights(&[q(1, 2), q(1, 3), q(1, 6)])
            .unwrap();
        assert_eq!(fam.intersection_measure(&[1, 2]).unwrap(), q(1, 3));
        assert_eq!(fam.intersection_measure(&[0, 1]).unwrap(), q(1, 2));
        let f = find_correlated(
            &fam,
            2,
            &q(2, 3),
            SearchMode::Exhaustive,
            &Budget::default(),
        );
        assert_eq!(f.unwrap(), vec![0, 1]);
        let bad = EventFamily::uniform(2, &[vec![0]])
            .unwrap()
            .with_weights(&[q(1, 2), q(1, 3)]);
        assert!(bad.is_err());
    }

    /// Direct per-point weight sum, independent of the bitset machinery.
    fn oracle_measure(ground: usize, events: &[Vec<usize>], set: &[usize]) -> ExactRational {
        let hits = (0..ground)
            .filter(|x| set.iter().all(|&i| events[i].contains(x)))
            .count();
        ExactRational::new(hits as u64, ground as u64).unwrap()
    }

    fn oracle_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (0..n)
            .flat_map(|last| {
                oracle_subsets(last, k - 1).into_iter().map(move |mut s| {
                    s.push(last);
                    s
                })
            })
            .collect()
    }

    fn family_strategy() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
        (2usize..12, 1usize..10).prop_flat_map(|(ground, n)| {
            let event = proptest::collection::btree_set(0..ground, 0..=ground)
                .prop_map(|s| s.into_iter().collect::<Vec<_>>());
            (Just(ground), proptest::collection::vec(event, n))
        })
    }

    proptest! {
        #[test]
        fn measure_matches_oracle((ground, events) in family_strategy(), pick in any::<u64>()) {
            let fam = EventFamily::uniform(ground, &events).unwrap();
            let n = events.len();
            let set: Vec<usize> = (0..n).filter(|i| pick >> i & 1 == 1).collect();
            prop_assume!(!set.is_empty());
            prop_assert_eq!(fam.intersection_measure(&set).unwrap(), oracle_measure(ground, &events, &set));
        }

        #[test]
        fn exhaustive_is_complete_and_lexicographic(
            (ground, events) in family_strategy(),
            k in 1usize..4,
            tn in 1u64..8,
        ) {
            let n = events.len();
            prop_assume!(k <= n);
            let theta = q(tn, 8);
            let need = theta.pow_checked(&BigUint::from(k), &Budget::default()).unwrap();
            let fam = EventFamily::uniform(ground, &events).unwrap();
            let expected = oracle_subsets(n, k)
                .into_iter()
                .map(|mut s| { s.sort(); s })
                .filter(|s| oracle_measure(ground, &events, s) >= need)
                .min();
            let got = find_correlated(&fam, k, &theta, SearchMode::Exhaustive, &Budget::default());
            match expected {
                Some(s) => prop_assert_eq!(got.unwrap(), s),
                None => prop_assert!(matches!(got, Err(Error::NotFound(_)))),
            }
            if let Ok(g) = find_correlated(&fam, k, &theta, SearchMode::Greedy, &Budget::default()) {
                prop_assert!(oracle_measure(ground, &events, &g) >= need);
                prop_assert_eq!(g.len(), k);
            }
        }
    }
}
