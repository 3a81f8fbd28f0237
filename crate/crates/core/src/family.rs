//! Finite families of level sets: membership in `𝓕(i, Γ, (D_k))`, hereditary
//! rank, and the search for one subgrid shared by many levels.

use std::collections::{BTreeMap, BTreeSet};

use crate::extraction::{fibers, k_subsets, LevelFamily};
use crate::grid::contains_product;
use crate::{
    Budget, Error, ExactRational, GridShape, NodeCounter, PointSet, Result, SubgridWitness,
};

/// Suffixes `y` over `[cut, k)` with `Γ⌢y ⊆ D`. An empty `Γ` constrains nothing.
fn compatible_suffixes(d: &PointSet, gamma: &PointSet) -> Result<PointSet> {
    let shape = d.shape();
    let cut = gamma.shape().end();
    if gamma.shape() != &shape.slice(shape.start(), cut)? {
        return Err(Error::domain("Γ does not match the level's prefix"));
    }
    let suffix = shape.slice(cut, shape.end())?;
    let r = gamma.cells();
    let mut acc = PointSet::full(suffix.clone());
    for x in gamma.indices() {
        acc = acc.intersection(&d.fiber_at(x, r, suffix.clone()))?;
    }
    Ok(acc)
}

fn rest_product(targets: &[usize], from: usize, to: usize) -> usize {
    targets[from..to].iter().product()
}

/// Chooses `I_q, I_{q+1}, …` so that every pending set keeps enough points.
/// Each entry of `pending` is `(k, S)` with `S` over `[q, k)`.
fn search_common(
    q: usize,
    pending: Vec<(usize, PointSet)>,
    targets: &[usize],
    subsets: &mut Vec<Vec<usize>>,
    nodes: &mut NodeCounter,
) -> Result<bool> {
    nodes.tick()?;
    if pending.is_empty() {
        return Ok(true);
    }
    let m = targets[q];
    let rests: Vec<usize> = pending
        .iter()
        .map(|(k, _)| rest_product(targets, q + 1, *k))
        .collect();
    let fibers: Vec<Vec<PointSet>> = pending.iter().map(|(_, s)| fibers(s)).collect();
    let n = fibers[0].len();
    let candidates: Vec<usize> = (0..n)
        .filter(|&x| fibers.iter().zip(&rests).all(|(f, &r)| f[x].count() >= r))
        .collect();

    struct Ctx<'a> {
        q: usize,
        m: usize,
        keys: Vec<usize>,
        rests: &'a [usize],
        fibers: &'a [Vec<PointSet>],
        candidates: &'a [usize],
        targets: &'a [usize],
    }

    fn choose(
        ctx: &Ctx<'_>,
        from: usize,
        acc: Option<Vec<PointSet>>,
        chosen: &mut Vec<usize>,
        subsets: &mut Vec<Vec<usize>>,
        nodes: &mut NodeCounter,
    ) -> Result<bool> {
        let remaining = ctx.m - chosen.len();
        if ctx.candidates.len() < from + remaining {
            return Ok(false);
        }
        'next: for c in from..=ctx.candidates.len() - remaining {
            nodes.tick()?;
            let x = ctx.candidates[c];
            let mut next = Vec::with_capacity(ctx.fibers.len());
            for (j, f) in ctx.fibers.iter().enumerate() {
                let s = match &acc {
                    Some(a) => a[j].intersection(&f[x])?,
                    None => f[x].clone(),
                };
                if s.count() < ctx.rests[j] {
                    continue 'next;
                }
                next.push(s);
            }
            chosen.push(x);
            let done = if remaining == 1 {
                subsets.push(chosen.clone());
                let pending: Vec<(usize, PointSet)> = ctx
                    .keys
                    .iter()
                    .zip(next)
                    .filter(|(k, _)| **k > ctx.q + 1)
                    .map(|(k, s)| (*k, s))
                    .collect();
                let found = search_common(ctx.q + 1, pending, ctx.targets, subsets, nodes)?;
                if !found {
                    subsets.pop();
                }
                found
            } else {
                choose(ctx, c + 1, Some(next), chosen, subsets, nodes)?
            };
            if done {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }

    let ctx = Ctx {
        q,
        m,
        keys: pending.iter().map(|(k, _)| *k).collect(),
        rests: &rests,
        fibers: &fibers,
        candidates: &candidates,
        targets,
    };
    let mut chosen = Vec::with_capacity(m);
    choose(&ctx, 0, None, &mut chosen, subsets, nodes)
}

fn check_levels(f: &[usize], i: usize, levels: &LevelFamily, targets: &[usize]) -> Result<()> {
    if f.is_empty() {
        return Err(Error::domain("F must be nonempty"));
    }
    for &k in f {
        if levels.get(k).is_none() {
            return Err(Error::domain(format!("level {k} is not in the family")));
        }
        if k <= i {
            return Err(Error::domain(format!(
                "level {k} does not exceed the cut {i}"
            )));
        }
    }
    let max = *f.iter().max().unwrap();
    if targets.len() < max {
        return Err(Error::domain(format!(
            "targets do not cover coordinates below {max}"
        )));
    }
    if targets[i..max].contains(&0) {
        return Err(Error::domain("targets must be positive"));
    }
    Ok(())
}

/// One witness `(I_q)_{q=i}^{max F − 1}` with `Γ⌢∏_{q=i}^{k−1} I_q ⊆ D_k` for every `k ∈ F`.
///
/// `targets[q]` is `m_q` for absolute coordinate `q`. Returns the
/// lexicographically least such witness.
pub fn family_member(
    f: &[usize],
    i: usize,
    gamma: &PointSet,
    levels: &LevelFamily,
    targets: &[usize],
    budget: &Budget,
) -> Result<Option<SubgridWitness>> {
    check_levels(f, i, levels, targets)?;
    let f: BTreeSet<usize> = f.iter().copied().collect();
    let mut pending = Vec::with_capacity(f.len());
    for &k in &f {
        let s = compatible_suffixes(levels.get(k).unwrap(), gamma)?;
        if s.count() < rest_product(targets, i, k) {
            return Ok(None);
        }
        pending.push((k, s));
    }
    let mut nodes = NodeCounter::new(budget);
    let mut subsets = Vec::new();
    if search_common(i, pending, targets, &mut subsets, &mut nodes)? {
        let w = SubgridWitness::new(i, subsets)?;
        debug_assert!(f.iter().all(|&k| contains_product(
            levels.get(k).unwrap(),
            &w.truncated(k),
            Some(gamma)
        )
        .unwrap_or(false)));
        Ok(Some(w))
    } else {
        Ok(None)
    }
}

/// A finite family of nonempty finite sets of levels, each stored sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSetFamily {
    ground: Vec<usize>,
    members: BTreeSet<Vec<usize>>,
}

impl FiniteSetFamily {
    pub fn new(ground: Vec<usize>, members: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut ground = ground;
        ground.sort_unstable();
        ground.dedup();
        let mut set = BTreeSet::new();
        for mut m in members {
            m.sort_unstable();
            m.dedup();
            if m.is_empty() {
                return Err(Error::domain("family members must be nonempty"));
            }
            if m.iter().any(|x| ground.binary_search(x).is_err()) {
                return Err(Error::domain(format!("member {m:?} leaves the ground set")));
            }
            set.insert(m);
        }
        Ok(FiniteSetFamily {
            ground,
            members: set,
        })
    }

    /// Every nonempty subset of `ground`.
    pub fn powerset(ground: Vec<usize>) -> Self {
        let n = ground.len();
        let members: Vec<Vec<usize>> = (1..=n)
            .flat_map(|s| k_subsets(n, s))
            .map(|idx| idx.iter().map(|&j| ground[j]).collect())
            .collect();
        FiniteSetFamily::new(ground, members).expect("subsets of the ground set")
    }

    pub fn ground(&self) -> &[usize] {
        &self.ground
    }

    pub fn members(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: &[usize]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        self.members.contains(&s)
    }

    /// Removing any one element of a member leaves a member or `∅`.
    pub fn is_hereditary(&self) -> bool {
        self.members.iter().filter(|m| m.len() > 1).all(|m| {
            (0..m.len()).all(|j| {
                let mut sub = m.clone();
                sub.remove(j);
                self.members.contains(&sub)
            })
        })
    }

    /// Members that are subsets of `m`, over ground `m`.
    pub fn restricted_to(&self, m: &[usize]) -> FiniteSetFamily {
        let allowed: BTreeSet<usize> = m.iter().copied().collect();
        let members: Vec<Vec<usize>> = self
            .members
            .iter()
            .filter(|s| s.iter().all(|x| allowed.contains(x)))
            .cloned()
            .collect();
        FiniteSetFamily::new(allowed.into_iter().collect(), members)
            .expect("restriction stays valid")
    }

    pub fn max_cardinality(&self) -> usize {
        self.members.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Every `F` of size at most `cap` with [`family_member`] nonempty.
///
/// A set is tested only when all its one-smaller subsets are members, which
/// is exact because the family is hereditary.
pub fn enumerate_family(
    i: usize,
    gamma: &PointSet,
    levels: &LevelFamily,
    targets: &[usize],
    cap: usize,
    budget: &Budget,
) -> Result<FiniteSetFamily> {
    let keys: Vec<usize> = levels.keys().into_iter().filter(|&k| k > i).collect();
    let mut members: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut frontier: Vec<Vec<usize>> = keys.iter().map(|&k| vec![k]).collect();
    let mut nodes = NodeCounter::new(budget);
    for size in 1..=cap.min(keys.len()) {
        let mut found = Vec::new();
        for f in frontier {
            nodes.tick()?;
            if family_member(&f, i, gamma, levels, targets, budget)?.is_some() {
                found.push(f);
            }
        }
        members.extend(found.iter().cloned());
        // Extend each member by a larger key; keep candidates whose every facet is known.
        let mut next = BTreeSet::new();
        for f in &found {
            let last = *f.last().unwrap();
            for &k in keys.iter().filter(|&&k| k > last) {
                let mut g = f.clone();
                g.push(k);
                let facets_ok = (0..g.len()).all(|j| {
                    let mut sub = g.clone();
                    sub.remove(j);
                    members.contains(&sub)
                });
                if facets_ok {
                    next.insert(g);
                }
            }
        }
        if size == cap {
            break;
        }
        frontier = next.into_iter().collect();
    }
    FiniteSetFamily::new(keys, members)
}

/// How `G` is required to extend `F` in the rank recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankOrder {
    /// `F ⊊ G` and every element of `G ∖ F` exceeds `max F`.
    EndExtension,
    /// `F ⊊ G`.
    Inclusion,
}

fn extends(f: &[usize], g: &[usize], order: RankOrder) -> bool {
    if g.len() <= f.len() || !f.iter().all(|x| g.binary_search(x).is_ok()) {
        return false;
    }
    match (order, f.last()) {
        (RankOrder::Inclusion, _) | (RankOrder::EndExtension, None) => true,
        (RankOrder::EndExtension, Some(max)) => g
            .iter()
            .filter(|x| f.binary_search(x).is_err())
            .all(|x| x > max),
    }
}

/// `r(∅)` where maximal members have rank 0 and `r(F) = max{r(G) + 1 : F ⊏ G}`.
pub fn hereditary_rank(fam: &FiniteSetFamily, order: RankOrder) -> Result<u64> {
    if !fam.is_hereditary() {
        return Err(Error::domain("family is not hereditary"));
    }
    let mut members: Vec<&Vec<usize>> = fam.members().collect();
    // Extensions are strictly larger, so decreasing size is a valid evaluation order.
    members.sort_by_key(|m| std::cmp::Reverse(m.len()));
    let mut rank: BTreeMap<&[usize], u64> = BTreeMap::new();
    for f in &members {
        let r = members
            .iter()
            .take_while(|g| g.len() > f.len())
            .filter(|g| extends(f, g, order))
            .map(|g| rank[g.as_slice()] + 1)
            .max()
            .unwrap_or(0);
        rank.insert(f.as_slice(), r);
    }
    Ok(members
        .iter()
        .map(|g| rank[g.as_slice()] + 1)
        .max()
        .unwrap_or(0))
}

/// Rank under both readings of the extension order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankReport {
    pub end_extension: u64,
    pub inclusion: u64,
}

impl RankReport {
    pub fn differ(&self) -> bool {
        self.end_extension != self.inclusion
    }
}

pub fn rank_report(fam: &FiniteSetFamily) -> Result<RankReport> {
    Ok(RankReport {
        end_extension: hereditary_rank(fam, RankOrder::EndExtension)?,
        inclusion: hereditary_rank(fam, RankOrder::Inclusion)?,
    })
}

/// One subgrid starting at the family's first coordinate shared by the levels in `kept`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonWitness {
    /// Spans coordinates up to `max(kept) − 1`.
    pub witness: SubgridWitness,
    pub kept: Vec<usize>,
    /// Whether every level met the density `δ` that was passed in.
    pub delta_dense: bool,
}

/// The largest `L′` with `|L′| ≥ t` admitting a common witness.
///
/// Level subsets are tried by decreasing size, then lexicographically, so the
/// first hit has maximum size. `NotFound` is exact: no `t` levels share a witness.
pub fn common_witness(
    levels: &LevelFamily,
    targets: &[usize],
    delta: &ExactRational,
    t: usize,
    budget: &Budget,
) -> Result<CommonWitness> {
    let keys = levels.keys();
    if t == 0 || t > keys.len() {
        return Err(Error::domain(format!(
            "t = {t} must lie in [1, {}]",
            keys.len()
        )));
    }
    let start = levels.start();
    let unit = PointSet::full(GridShape::unit(start));
    let mut nodes = NodeCounter::new(budget);
    for size in (t..=keys.len()).rev() {
        for idx in k_subsets(keys.len(), size) {
            nodes.tick()?;
            let f: Vec<usize> = idx.iter().map(|&j| keys[j]).collect();
            if let Some(witness) = family_member(&f, start, &unit, levels, targets, budget)? {
                return Ok(CommonWitness {
                    witness,
                    kept: f,
                    delta_dense: levels.is_dense(delta),
                });
            }
        }
    }
    Err(Error::not_found(format!(
        "no {t} levels share a subgrid of the requested sizes"
    )))
}

/// Largest set of levels satisfied by any full witness, by plain enumeration.
///
/// Returns the first maximizing witness in lexicographic order together with its levels.
pub fn brute_force_common_witness(
    levels: &LevelFamily,
    targets: &[usize],
    budget: &Budget,
) -> Result<Option<(SubgridWitness, Vec<usize>)>> {
    let keys = levels.keys();
    let Some(&end) = keys.last() else {
        return Ok(None);
    };
    let start = levels.start();
    let sizes = &levels.base().sizes()[..end - start];
    if targets.len() < end {
        return Err(Error::domain("targets do not cover every level"));
    }
    let choices: Vec<Vec<Vec<usize>>> = sizes
        .iter()
        .zip(&targets[start..end])
        .map(|(&n, &m)| k_subsets(n, m))
        .collect();
    choices
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .filter(|&t| t <= budget.max_nodes)
        .ok_or_else(|| Error::budget("too many candidate witnesses for brute force"))?;
    if choices.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut best: Option<(SubgridWitness, Vec<usize>)> = None;
    let mut pos = vec![0usize; choices.len()];
    loop {
        let w = SubgridWitness::new(
            start,
            pos.iter()
                .zip(&choices)
                .map(|(&p, c)| c[p].clone())
                .collect(),
        )?;
        let mut sat = Vec::new();
        for &k in &keys {
            if contains_product(levels.get(k).unwrap(), &w.truncated(k), None)? {
                sat.push(k);
            }
        }
        if !sat.is_empty() && best.as_ref().is_none_or(|(_, b)| sat.len() > b.len()) {
            best = Some((w, sat));
        }
        let mut q = choices.len();
        loop {
            if q == 0 {
                return Ok(best);
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
