//! Extracting full subgrids `∏ I_q ⊆ D` from dense sets, and the
//! split-and-stabilize step that cuts a family of levels at a coordinate.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::correlation::{find_correlated, EventFamily, SearchMode};
use crate::grid::{contains_product, BitSet};
use crate::{
    Bounds, Budget, Error, ExactRational, GridShape, NodeCounter, PointSet, Result, SubgridWitness,
};

/// Sets `D_k ⊆ ∏_{q=start}^{k−1} H_q` for finitely many levels `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelFamily {
    base: GridShape,
    levels: BTreeMap<usize, PointSet>,
}

impl LevelFamily {
    /// `base` covers every coordinate any level uses; level `k` must be a
    /// set over `[base.start(), k)`.
    pub fn new(base: GridShape, levels: BTreeMap<usize, PointSet>) -> Result<Self> {
        for (&k, set) in &levels {
            if k <= base.start() || k > base.end() {
                return Err(Error::domain(format!(
                    "level {k} outside ({}, {}]",
                    base.start(),
                    base.end()
                )));
            }
            if set.shape() != &base.slice(base.start(), k)? {
                return Err(Error::domain(format!("level {k} has the wrong shape")));
            }
        }
        Ok(LevelFamily { base, levels })
    }

    pub fn base(&self) -> &GridShape {
        &self.base
    }

    pub fn start(&self) -> usize {
        self.base.start()
    }

    pub fn levels(&self) -> &BTreeMap<usize, PointSet> {
        &self.levels
    }

    pub fn keys(&self) -> Vec<usize> {
        self.levels.keys().copied().collect()
    }

    pub fn get(&self, k: usize) -> Option<&PointSet> {
        self.levels.get(&k)
    }

    /// The levels `k > cut` only.
    pub fn above(&self, cut: usize) -> LevelFamily {
        LevelFamily {
            base: self.base.clone(),
            levels: self
                .levels
                .range(cut + 1..)
                .map(|(&k, d)| (k, d.clone()))
                .collect(),
        }
    }

    /// Whether every level has density at least `eps`.
    pub fn is_dense(&self, eps: &ExactRational) -> bool {
        self.levels.values().all(|d| &d.density() >= eps)
    }
}

/// `ε_0 = ε`, `ε_{q+1} = (ε_q/4)^{m_q}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensitySchedule(pub Vec<ExactRational>);

pub fn density_schedule(
    eps: &ExactRational,
    targets: &[usize],
    budget: &Budget,
) -> Result<DensitySchedule> {
    if eps.is_zero() || eps > &ExactRational::one() {
        return Err(Error::domain(format!("eps = {eps} must lie in (0, 1]")));
    }
    if targets.contains(&0) {
        return Err(Error::domain("targets must be positive"));
    }
    let mut out = vec![eps.clone()];
    for &m in targets {
        let quarter = out.last().unwrap().mul_pow2(-2, budget)?;
        out.push(quarter.pow_checked(&BigUint::from(m), budget)?);
    }
    Ok(DensitySchedule(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractMode {
    /// Follow the inductive construction: dense fibers, a correlated
    /// choice of `I_q`, then intersect. No backtracking.
    Proof,
    /// Complete depth-first search returning the lexicographically least witness.
    Exhaustive,
}

/// How an input relates to the hypotheses under which proof mode is guaranteed to succeed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofHypotheses {
    pub density_ok: bool,
    /// Coordinates `q` with `|H_q| < t_bound(ε, (m_0..m_q))`.
    pub below_bound: Vec<usize>,
}

impl ProofHypotheses {
    pub fn hold(&self) -> bool {
        self.density_ok && self.below_bound.is_empty()
    }
}

pub fn proof_hypotheses(
    d: &PointSet,
    targets: &[usize],
    eps: &ExactRational,
    budget: &Budget,
) -> Result<ProofHypotheses> {
    check_targets(d.shape(), targets)?;
    let bounds = Bounds::with_budget(*budget);
    let m: Vec<u64> = targets.iter().map(|&x| x as u64).collect();
    let mut below_bound = Vec::new();
    for (j, &n) in d.shape().sizes().iter().enumerate() {
        if m[j] < 2 {
            // Σ(·, ·, 1) is vacuous: a single element suffices.
            continue;
        }
        let met = match bounds.t_bound(eps, &m[..=j]) {
            Ok(t) => ExactRational::from(n as u64) >= t,
            Err(Error::BudgetExceeded(_)) => false,
            Err(e) => return Err(e),
        };
        if !met {
            below_bound.push(d.shape().start() + j);
        }
    }
    Ok(ProofHypotheses {
        density_ok: &d.density() >= eps,
        below_bound,
    })
}

fn check_targets(shape: &GridShape, targets: &[usize]) -> Result<()> {
    if shape.dims() == 0 {
        return Err(Error::domain("extraction needs at least one coordinate"));
    }
    if targets.len() != shape.dims() {
        return Err(Error::domain(format!(
            "{} targets for {} coordinates",
            targets.len(),
            shape.dims()
        )));
    }
    if targets.contains(&0) {
        return Err(Error::domain("targets must be positive"));
    }
    Ok(())
}

pub(crate) fn fibers(current: &PointSet) -> Vec<PointSet> {
    let shape = current.shape();
    let n = shape.sizes()[0];
    let suffix = shape.slice(shape.start() + 1, shape.end()).expect("inside");
    (0..n)
        .into_par_iter()
        .map(|x| current.fiber_at(x, n, suffix.clone()))
        .collect()
}

/// Finds `(I_q)` with `|I_q| = targets[q]` and `∏ I_q ⊆ d`.
///
/// `targets` is indexed relative to the set's first coordinate. Proof mode
/// treats `eps` as the density it may assume; use [`proof_hypotheses`] to see
/// whether the success guarantee applies to a given input.
pub fn extract_subgrid(
    d: &PointSet,
    targets: &[usize],
    eps: &ExactRational,
    mode: ExtractMode,
    budget: &Budget,
) -> Result<SubgridWitness> {
    check_targets(d.shape(), targets)?;
    if let Some((j, _)) = targets
        .iter()
        .zip(d.shape().sizes())
        .enumerate()
        .find(|(_, (m, n))| m > n)
    {
        return Err(Error::not_found(format!(
            "coordinate {} has fewer than {} elements",
            d.shape().start() + j,
            targets[j]
        )));
    }
    let witness = match mode {
        ExtractMode::Proof => extract_proof(d, targets, eps, budget)?,
        ExtractMode::Exhaustive => extract_exhaustive(d, targets, budget)?.ok_or_else(|| {
            Error::not_found("no subgrid of the requested sizes lies inside the set")
        })?,
    };
    debug_assert!(contains_product(d, &witness, None).unwrap_or(false));
    Ok(witness)
}

fn smallest_members(last: &PointSet, m: usize, q: usize) -> Result<Vec<usize>> {
    let picked: Vec<usize> = last.indices().take(m).collect();
    if picked.len() < m {
        return Err(Error::not_found(format!(
            "final coordinate {q} has only {} admissible elements, need {m}",
            picked.len()
        )));
    }
    Ok(picked)
}

fn extract_proof(
    d: &PointSet,
    targets: &[usize],
    eps: &ExactRational,
    budget: &Budget,
) -> Result<SubgridWitness> {
    let schedule = density_schedule(eps, targets, budget)?.0;
    let start = d.shape().start();
    let k = targets.len() - 1;
    let mut current = d.clone();
    let mut subsets = Vec::with_capacity(targets.len());
    for (q, &m) in targets[..k].iter().enumerate() {
        let eps_q = &schedule[q];
        let half = eps_q.mul_pow2(-1, budget)?;
        let theta = eps_q.mul_pow2(-2, budget)?;
        let fibers = fibers(&current);
        let heavy: Vec<usize> = (0..fibers.len())
            .filter(|&x| fibers[x].density() >= half)
            .collect();
        let fam = EventFamily::from_point_sets(heavy.iter().map(|&x| &fibers[x]))?;
        let chosen = match find_correlated(&fam, m, &theta, SearchMode::Greedy, budget) {
            Ok(f) => f,
            Err(Error::NotFound(_)) => {
                find_correlated(&fam, m, &theta, SearchMode::Exhaustive, budget).map_err(|e| {
                    match e {
                        Error::NotFound(msg) => {
                            Error::not_found(format!("coordinate {}: {msg}", start + q))
                        }
                        other => other,
                    }
                })?
            }
            Err(e) => return Err(e),
        };
        let chosen: Vec<usize> = chosen.into_iter().map(|i| heavy[i]).collect();
        let mut next = fibers[chosen[0]].clone();
        for &x in &chosen[1..] {
            next = next.intersection(&fibers[x])?;
        }
        subsets.push(chosen);
        current = next;
    }
    subsets.push(smallest_members(&current, targets[k], start + k)?);
    SubgridWitness::new(start, subsets)
}

fn extract_exhaustive(
    d: &PointSet,
    targets: &[usize],
    budget: &Budget,
) -> Result<Option<SubgridWitness>> {
    let mut nodes = NodeCounter::new(budget);
    let mut subsets = Vec::with_capacity(targets.len());
    if search_coordinate(d, targets, &mut subsets, &mut nodes)? {
        Ok(Some(SubgridWitness::new(d.shape().start(), subsets)?))
    } else {
        Ok(None)
    }
}

/// `current` is the set of suffixes compatible with every prefix chosen so far.
fn search_coordinate(
    current: &PointSet,
    targets: &[usize],
    subsets: &mut Vec<Vec<usize>>,
    nodes: &mut NodeCounter,
) -> Result<bool> {
    nodes.tick()?;
    let m = targets[0];
    if targets.len() == 1 {
        let members: Vec<usize> = current.indices().take(m).collect();
        if members.len() < m {
            return Ok(false);
        }
        subsets.push(members);
        return Ok(true);
    }
    let rest: usize = targets[1..].iter().product();
    let fibers = fibers(current);
    let candidates: Vec<usize> = (0..fibers.len())
        .filter(|&x| fibers[x].count() >= rest)
        .collect();

    #[allow(clippy::too_many_arguments)]
    fn choose(
        fibers: &[PointSet],
        candidates: &[usize],
        from: usize,
        acc: Option<&PointSet>,
        chosen: &mut Vec<usize>,
        targets: &[usize],
        rest: usize,
        subsets: &mut Vec<Vec<usize>>,
        nodes: &mut NodeCounter,
    ) -> Result<bool> {
        let m = targets[0];
        let remaining = m - chosen.len();
        if candidates.len() < from + remaining {
            return Ok(false);
        }
        for c in from..=candidates.len() - remaining {
            nodes.tick()?;
            let x = candidates[c];
            let next = match acc {
                Some(a) => a.intersection(&fibers[x])?,
                None => fibers[x].clone(),
            };
            if next.count() < rest {
                continue;
            }
            chosen.push(x);
            let done = if remaining == 1 {
                subsets.push(chosen.clone());
                if search_coordinate(&next, &targets[1..], subsets, nodes)? {
                    true
                } else {
                    subsets.pop();
                    false
                }
            } else {
                choose(
                    fibers,
                    candidates,
                    c + 1,
                    Some(&next),
                    chosen,
                    targets,
                    rest,
                    subsets,
                    nodes,
                )?
            };
            if done {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }

    let mut chosen = Vec::with_capacity(m);
    choose(
        &fibers,
        &candidates,
        0,
        None,
        &mut chosen,
        targets,
        rest,
        subsets,
        nodes,
    )
}

/// Lexicographically least witness by plain enumeration of every candidate tuple.
pub fn brute_force_subgrid(
    d: &PointSet,
    targets: &[usize],
    budget: &Budget,
) -> Result<Option<SubgridWitness>> {
    check_targets(d.shape(), targets)?;
    let shape = d.shape();
    let choices: Vec<Vec<Vec<usize>>> = shape
        .sizes()
        .iter()
        .zip(targets)
        .map(|(&n, &m)| k_subsets(n, m))
        .collect();
    let total = choices
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .filter(|&t| t <= budget.max_nodes)
        .ok_or_else(|| Error::budget("too many candidate witnesses for brute force"))?;
    if total == 0 {
        return Ok(None);
    }
    // Odometer with coordinate 0 most significant gives lexicographic order.
    let mut pos = vec![0usize; choices.len()];
    loop {
        let w = SubgridWitness::new(
            shape.start(),
            pos.iter()
                .zip(&choices)
                .map(|(&p, c)| c[p].clone())
                .collect(),
        )?;
        if contains_product(d, &w, None)? {
            return Ok(Some(w));
        }
        let mut q = choices.len();
        loop {
            if q == 0 {
                return Ok(None);
            }
            q -= 1;
            pos[q] += 1;
            if pos[q] < choices[q].len() {
                break;
            }
            pos[q] = 0;
        }
    }
}

/// All `m`-subsets of `0..n` in lexicographic order.
pub(crate) fn k_subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        out.push(idx.clone());
        let Some(p) = (0..m).rev().find(|&p| idx[p] < n - m + p) else {
            return out;
        };
        idx[p] += 1;
        for j in p + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn slice_targets(targets: &[usize], from: usize, to: usize) -> Result<&[usize]> {
    targets
        .get(from..to)
        .ok_or_else(|| Error::domain(format!("targets do not cover coordinates [{from}, {to})")))
}

/// Independent witnesses for every level; `targets[q]` is `m_q` for absolute coordinate `q`.
///
/// Levels below density `eps` report `NotFound` without being searched.
pub fn extract_per_level(
    levels: &LevelFamily,
    targets: &[usize],
    eps: &ExactRational,
    mode: ExtractMode,
    budget: &Budget,
) -> BTreeMap<usize, Result<SubgridWitness>> {
    let start = levels.start();
    levels
        .levels()
        .par_iter()
        .map(|(&k, d)| {
            let result = (|| {
                if &d.density() < eps {
                    return Err(Error::not_found(format!(
                        "level {k} has density {} below {eps}",
                        d.density()
                    )));
                }
                let w = extract_subgrid(d, slice_targets(targets, start, k)?, eps, mode, budget)?;
                if !contains_product(d, &w, None)? {
                    return Err(Error::domain(format!(
                        "level {k}: witness failed verification"
                    )));
                }
                Ok(w)
            })();
            (k, result)
        })
        .collect()
}

/// Output of [`fubini_split`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FubiniSplit {
    /// `Γ ⊆ ∏_{q=start}^{cut−1} H_q`.
    pub gamma: PointSet,
    /// Levels whose dominant prefix pattern equals `Γ`.
    pub kept: Vec<usize>,
    /// `D̃_k` over `[cut, k)` for every kept level, with `Γ⌢D̃_k ⊆ D_k`.
    pub tail: LevelFamily,
}

/// Dominant prefix pattern of one level: `(Γ_k, D̃_k)`.
fn dominant_pattern(
    d: &PointSet,
    prefix: &GridShape,
    suffix: &GridShape,
    theta: &ExactRational,
) -> Option<(PointSet, PointSet)> {
    let r = prefix.cells();
    let mut groups: HashMap<BitSet, Vec<usize>> = HashMap::new();
    for y in 0..suffix.cells() {
        let pattern = d.section_at(y, prefix.clone());
        if &pattern.density() >= theta {
            groups.entry(pattern.bits().clone()).or_default().push(y);
        }
    }
    let (bits, members) = groups
        .into_iter()
        .map(|(bits, ys)| (PointSet::from_bits(prefix.clone(), bits), ys))
        .max_by(|(pa, ya), (pb, yb)| ya.len().cmp(&yb.len()).then_with(|| pb.cmp(pa)))?;
    debug_assert_eq!(bits.cells(), r);
    let tilde = PointSet::from_indices(suffix.clone(), members).expect("suffix indices");
    Some((bits, tilde))
}

/// Cuts every level at coordinate `cut` and keeps the levels sharing the most
/// common dominant prefix pattern `Γ`.
///
/// For each kept level, `density(Γ) ≥ θ`, `Γ⌢D̃_k ⊆ D_k`, and when
/// `density(D_k) ≥ ε` also `density(D̃_k) ≥ (ε−θ)/2^r` with `r = |∏_{q<cut} H_q|`.
pub fn fubini_split(
    levels: &LevelFamily,
    cut: usize,
    theta: &ExactRational,
    eps: &ExactRational,
    budget: &Budget,
) -> Result<FubiniSplit> {
    if theta.is_zero() || theta >= eps || eps > &ExactRational::one() {
        return Err(Error::domain("split requires 0 < theta < eps <= 1"));
    }
    let base = levels.base();
    if cut <= base.start() || cut >= base.end() {
        return Err(Error::domain(format!(
            "cut {cut} must lie strictly inside ({}, {})",
            base.start(),
            base.end()
        )));
    }
    if let Some(&k) = levels.levels().keys().find(|&&k| k <= cut) {
        return Err(Error::domain(format!(
            "level {k} does not extend past the cut {cut}"
        )));
    }
    if levels.levels().is_empty() {
        return Err(Error::domain("no levels to split"));
    }
    let prefix = base.slice(base.start(), cut)?;
    if prefix.cells() as u64 > budget.max_bits {
        return Err(Error::budget(format!(
            "prefix with {} cells gives a 2^r pattern space beyond the bit budget",
            prefix.cells()
        )));
    }
    let per_level: Vec<(usize, Result<(PointSet, PointSet)>)> = levels
        .levels()
        .par_iter()
        .map(|(&k, d)| {
            let result = (|| {
                if &d.density() < eps {
                    return Err(Error::not_found(format!(
                        "level {k} has density {} below {eps}",
                        d.density()
                    )));
                }
                let suffix = base.slice(cut, k)?;
                dominant_pattern(d, &prefix, &suffix, theta).ok_or_else(|| {
                    Error::not_found(format!(
                        "level {k}: no suffix has a prefix section of density >= {theta}"
                    ))
                })
            })();
            (k, result)
        })
        .collect();
    let mut patterns = BTreeMap::new();
    for (k, r) in per_level {
        patterns.insert(k, r?);
    }

    let mut votes: BTreeMap<&PointSet, Vec<usize>> = BTreeMap::new();
    for (&k, (gamma, _)) in &patterns {
        votes.entry(gamma).or_default().push(k);
    }
    // BTreeMap iterates patterns in increasing order, so the first maximum is the least.
    let (gamma, kept) = votes
        .into_iter()
        .fold(
            None,
            |best: Option<(&PointSet, Vec<usize>)>, (g, ks)| match best {
                Some((bg, bks)) if bks.len() >= ks.len() => Some((bg, bks)),
                _ => Some((g, ks)),
            },
        )
        .expect("at least one level");
    let gamma = gamma.clone();
    let tail_levels = kept.iter().map(|k| (*k, patterns[k].1.clone())).collect();
    let tail = LevelFamily::new(base.slice(cut, base.end())?, tail_levels)?;
    Ok(FubiniSplit { gamma, kept, tail })
}

/// Output of [`split_and_extract`].
#[derive(Debug)]
pub struct SplitExtraction {
    pub split: FubiniSplit,
    /// Per kept level, a witness over `[cut, k)` with `Γ⌢∏ I_q ⊆ D_k`.
    pub witnesses: BTreeMap<usize, Result<SubgridWitness>>,
}

/// `(ε − θ)/2^r`, the density the split guarantees for each `D̃_k`.
pub fn split_density(
    theta: &ExactRational,
    eps: &ExactRational,
    prefix_cells: usize,
    budget: &Budget,
) -> Result<ExactRational> {
    let gap = eps
        .checked_sub(theta)
        .ok_or_else(|| Error::domain("theta must be below eps"))?;
    gap.mul_pow2(-(prefix_cells as i64), budget)
}

/// [`fubini_split`] followed by per-level extraction at density `(ε − θ)/2^r`.
pub fn split_and_extract(
    levels: &LevelFamily,
    cut: usize,
    theta: &ExactRational,
    eps: &ExactRational,
    targets: &[usize],
    mode: ExtractMode,
    budget: &Budget,
) -> Result<SplitExtraction> {
    let split = fubini_split(levels, cut, theta, eps, budget)?;
    let r = split.gamma.cells();
    let reduced = split_density(theta, eps, r, budget)?;
    let mut witnesses = extract_per_level(&split.tail, targets, &reduced, mode, budget);
    for (k, w) in witnesses.iter_mut() {
        if let Ok(wit) = w {
            let d = &levels.levels()[k];
            if !contains_product(d, wit, Some(&split.gamma))? {
                *w = Err(Error::domain(format!(
                    "level {k}: Γ⌢∏I_q is not inside D_k"
                )));
            }
        }
    }
    Ok(SplitExtraction { split, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::concat_sets;

    fn q(n: u64, d: u64) -> ExactRational {
        ExactRational::frac(n, d)
    }

    fn shape(sizes: &[usize]) -> GridShape {
        GridShape::new(0, sizes.to_vec()).unwrap()
    }

    fn family(sizes: &[usize], levels: Vec<(usize, PointSet)>) -> LevelFamily {
        LevelFamily::new(shape(sizes), levels.into_iter().collect()).unwrap()
    }

    #[test]
    fn schedule_examples() {
        let b = Budget::default();
        assert_eq!(
            density_schedule(&q(1, 2), &[2, 2], &b).unwrap().0,
            vec![q(1, 2), q(1, 64), q(1, 65536)]
        );
        assert_eq!(
            density_schedule(&q(1, 1), &[2], &b).unwrap().0,
            vec![q(1, 1), q(1, 16)]
        );
    }

    #[test]
    fn schedule_matches_closed_form() {
        let b = Budget::default();
        let bounds = Bounds::default();
        for (eps, targets) in [
            (q(1, 2), vec![2usize, 3, 2]),
            (q(3, 5), vec![1, 4, 2]),
            (q(1, 1), vec![3, 2]),
        ] {
            let s = density_schedule(&eps, &targets, &b).unwrap().0;
            for qi in 1..s.len() {
                let mut m: Vec<u64> = targets[..qi].iter().map(|&x| x as u64).collect();
                m.push(2);
                assert_eq!(s[qi], bounds.eps_prime(&eps, &m).unwrap());
            }
        }
    }

    #[test]
    fn full_set_gives_first_values() {
        let d = PointSet::full(shape(&[4, 3, 5]));
        let b = Budget::default();
        for mode in [ExtractMode::Proof, ExtractMode::Exhaustive] {
            let w = extract_subgrid(&d, &[2, 2, 3], &q(1, 1), mode, &b).unwrap();
            assert_eq!(w.subsets, vec![vec![0, 1], vec![0, 1], vec![0, 1, 2]]);
        }
    }

    #[test]
    fn off_diagonal_has_no_two_by_two() {
        let d = PointSet::from_fn(shape(&[3, 3]), |c| c[0] != c[1]);
        let b = Budget::default();
        for mode in [ExtractMode::Proof, ExtractMode::Exhaustive] {
            let r = extract_subgrid(&d, &[2, 2], &d.density(), mode, &b);
            assert!(matches!(r, Err(Error::NotFound(_))), "{mode:?}");
        }
        assert_eq!(brute_force_subgrid(&d, &[2, 2], &b).unwrap(), None);
    }

    #[test]
    fn planted_block_is_found() {
        // {0,1}×{3,4} plus noise.
        let d = PointSet::from_fn(shape(&[5, 5]), |c| {
            (c[0] < 2 && c[1] >= 3) || (c[0] + 2 * c[1]) % 3 == 0
        });
        let b = Budget::default();
        let w = extract_subgrid(&d, &[2, 2], &q(1, 2), ExtractMode::Exhaustive, &b).unwrap();
        assert!(contains_product(&d, &w, None).unwrap());
        assert_eq!(Some(w), brute_force_subgrid(&d, &[2, 2], &b).unwrap());
    }

    #[test]
    fn targets_larger_than_sizes() {
        let d = PointSet::full(shape(&[2, 2]));
        let r = extract_subgrid(
            &d,
            &[3, 1],
            &q(1, 1),
            ExtractMode::Exhaustive,
            &Budget::default(),
        );
        assert!(matches!(r, Err(Error::NotFound(_))));
        let r = extract_subgrid(
            &d,
            &[1],
            &q(1, 1),
            ExtractMode::Exhaustive,
            &Budget::default(),
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn hypotheses_report() {
        let d = PointSet::full(shape(&[88]));
        let h = proof_hypotheses(&d, &[2], &q(1, 2), &Budget::default()).unwrap();
        assert!(h.hold());
        let d = PointSet::full(shape(&[87]));
        let h = proof_hypotheses(&d, &[2], &q(1, 2), &Budget::default()).unwrap();
        assert_eq!(h.below_bound, vec![0]);
    }

    #[test]
    fn exhaustive_matches_brute_force_on_all_3x3() {
        let b = Budget::default();
        let s = shape(&[3, 3]);
        for mask in 0u32..512 {
            let d =
                PointSet::from_indices(s.clone(), (0..9).filter(|i| mask >> i & 1 == 1)).unwrap();
            let ex = extract_subgrid(&d, &[2, 2], &q(1, 1), ExtractMode::Exhaustive, &b).ok();
            assert_eq!(
                ex,
                brute_force_subgrid(&d, &[2, 2], &b).unwrap(),
                "mask {mask}"
            );
        }
    }

    #[test]
    fn per_level_examples() {
        let sizes = [3, 3, 3];
        let levels = family(
            &sizes,
            vec![
                (1, PointSet::full(shape(&[3]))),
                (2, PointSet::from_fn(shape(&[3, 3]), |c| c[0] != c[1])),
                (3, PointSet::full(shape(&[3, 3, 3]))),
            ],
        );
        let out = extract_per_level(
            &levels,
            &[2, 2, 2],
            &q(1, 2),
            ExtractMode::Exhaustive,
            &Budget::default(),
        );
        assert_eq!(out[&1].as_ref().unwrap().subsets, vec![vec![0, 1]]);
        assert!(matches!(out[&2], Err(Error::NotFound(_))));
        assert_eq!(out[&3].as_ref().unwrap().subsets, vec![vec![0, 1]; 3]);

        let sparse = family(
            &sizes,
            vec![(1, PointSet::from_indices(shape(&[3]), [0]).unwrap())],
        );
        let out = extract_per_level(
            &sparse,
            &[1, 1, 1],
            &q(1, 2),
            ExtractMode::Exhaustive,
            &Budget::default(),
        );
        assert!(matches!(out[&1], Err(Error::NotFound(_))));
    }

    #[test]
    fn split_of_full_levels() {
        let sizes = [2, 3, 2];
        let levels = family(
            &sizes,
            vec![
                (2, PointSet::full(shape(&[2, 3]))),
                (3, PointSet::full(shape(&[2, 3, 2]))),
            ],
        );
        let s = fubini_split(&levels, 1, &q(1, 2), &q(1, 1), &Budget::default()).unwrap();
        assert_eq!(s.gamma, PointSet::full(shape(&[2])));
        assert_eq!(s.kept, vec![2, 3]);
        assert_eq!(
            s.tail.get(3).unwrap(),
            &PointSet::full(GridShape::new(1, vec![3, 2]).unwrap())
        );
    }

    #[test]
    fn split_keeps_majority_pattern() {
        // Levels 2 and 3 force prefix pattern {0}; level 4 forces {1}.
        let sizes = [2, 2, 2, 2];
        let forced =
            |k: usize, x0: usize| PointSet::from_fn(shape(&sizes[..k]), move |c| c[0] == x0);
        let levels = family(
            &sizes,
            vec![(2, forced(2, 0)), (3, forced(3, 0)), (4, forced(4, 1))],
        );
        let s = fubini_split(&levels, 1, &q(1, 4), &q(1, 2), &Budget::default()).unwrap();
        assert_eq!(s.kept, vec![2, 3]);
        assert_eq!(s.gamma.indices().collect::<Vec<_>>(), vec![0]);

        // A tie between the two patterns goes to the lexicographically least one, {0}.
        let tied = family(&sizes, vec![(2, forced(2, 1)), (3, forced(3, 0))]);
        let s = fubini_split(&tied, 1, &q(1, 4), &q(1, 2), &Budget::default()).unwrap();
        assert_eq!(s.kept, vec![3]);
    }

    #[test]
    fn split_rejects_bad_input() {
        let sizes = [2, 2];
        let levels = family(
            &sizes,
            vec![
                (1, PointSet::full(shape(&[2]))),
                (2, PointSet::full(shape(&[2, 2]))),
            ],
        );
        let b = Budget::default();
        assert!(matches!(
            fubini_split(&levels, 1, &q(1, 4), &q(1, 2), &b),
            Err(Error::Domain(_))
        ));
        let levels = family(&sizes, vec![(2, PointSet::full(shape(&[2, 2])))]);
        assert!(matches!(
            fubini_split(&levels, 1, &q(1, 2), &q(1, 2), &b),
            Err(Error::Domain(_))
        ));
        let sparse = family(
            &sizes,
            vec![(2, PointSet::from_indices(shape(&[2, 2]), [0]).unwrap())],
        );
        assert!(matches!(
            fubini_split(&sparse, 1, &q(1, 4), &q(1, 2), &b),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn split_and_extract_planted() {
        let sizes = [3, 4, 4, 4];
        let gamma = PointSet::from_indices(shape(&[3]), [0, 2]).unwrap();
        let levels: Vec<(usize, PointSet)> = (2..=4)
            .map(|k| {
                let block =
                    PointSet::from_fn(GridShape::new(1, sizes[1..k].to_vec()).unwrap(), |c| {
                        c.iter().all(|&x| x == 1 || x == 3)
                    });
                let planted = concat_sets(&gamma, &block).unwrap();
                let noise = PointSet::from_fn(shape(&sizes[..k]), |c| c[0] == 1 && c[1] % 2 == 0);
                let members: Vec<usize> = planted.indices().chain(noise.indices()).collect();
                (
                    k,
                    PointSet::from_indices(shape(&sizes[..k]), members).unwrap(),
                )
            })
            .collect();
        let fam = family(&sizes, levels);
        let eps = q(1, 32);
        assert!(fam.is_dense(&eps));
        let out = split_and_extract(
            &fam,
            1,
            &q(1, 64),
            &eps,
            &[1, 2, 2, 2],
            ExtractMode::Exhaustive,
            &Budget::default(),
        )
        .unwrap();
        assert!(!out.split.kept.is_empty());
        for k in &out.split.kept {
            let w = out.witnesses[k].as_ref().unwrap();
            assert!(contains_product(fam.get(*k).unwrap(), w, Some(&out.split.gamma)).unwrap());
        }
    }
}
