//! Words in the reflection group generated by involutions `t_x`, one per
//! point, with relations `t_x^2 = 1` and `(t_x t_y t_z)^2 = 1` for every
//! collinear triple.
//!
//! Normal forms are computed by exploring the closure of a word under the
//! length-preserving moves `xyz -> zyx`, cancelling whenever an adjacent
//! pair of equal letters appears.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cubic::AbstractCubic;
use crate::equivalence::QuasigroupTable;
use crate::error::{Error, Result};

pub type Word = Vec<usize>;

pub const DEFAULT_BUDGET: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub word: Word,
    /// False when the budget ran out; `word` is then only an upper bound.
    pub minimal: bool,
    pub closure_size: usize,
    pub budget_hit: bool,
}

impl NormalForm {
    fn into_result(self, budget: usize) -> Result<Word> {
        if self.budget_hit {
            Err(Error::BudgetExhausted { budget })
        } else {
            Ok(self.word)
        }
    }
}

/// Cancels adjacent equal letters until none remain.
pub fn free_reduce(w: &[usize]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn inverse(w: &[usize]) -> Word {
    w.iter().rev().copied().collect()
}

pub fn concat(a: &[usize], b: &[usize]) -> Word {
    a.iter().chain(b).copied().collect()
}

fn has_cancellation(w: &[usize]) -> bool {
    w.windows(2).any(|p| p[0] == p[1])
}

fn for_each_neighbor(w: &[usize], p: &AbstractCubic, mut visit: impl FnMut(Word)) {
    for i in 0..w.len().saturating_sub(2) {
        let (a, b, c) = (w[i], w[i + 1], w[i + 2]);
        if a != c && p.contains([a, b, c]) {
            let mut v = w.to_vec();
            v.swap(i, i + 2);
            visit(v);
        }
    }
}

/// Words reachable by one move `[a, b, c] -> [c, b, a]` with `(a, b, c)`
/// collinear.
pub fn rewrite_neighbors(w: &[usize], p: &AbstractCubic) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for_each_neighbor(w, p, |v| {
        out.insert(v);
    });
    out
}

/// Minimal representative of `w`: the lexicographically least word in the
/// move closure of a fully cancelled representative. `budget` bounds the
/// total number of words visited.
pub fn normal_form(w: &[usize], p: &AbstractCubic, budget: usize) -> NormalForm {
    let mut current = free_reduce(w);
    let mut explored = 0usize;
    'restart: loop {
        let mut seen: HashSet<Word> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(current.clone());
        queue.push_back(current.clone());
        explored += 1;
        while let Some(u) = queue.pop_front() {
            if has_cancellation(&u) {
                current = free_reduce(&u);
                continue 'restart;
            }
            let mut over = false;
            for_each_neighbor(&u, p, |v| {
                if over || seen.contains(&v) {
                    return;
                }
                if explored >= budget {
                    over = true;
                    return;
                }
                explored += 1;
                seen.insert(v.clone());
                queue.push_back(v);
            });
            if over {
                let best = seen.into_iter().min().unwrap();
                return NormalForm {
                    word: best,
                    minimal: false,
                    closure_size: explored,
                    budget_hit: true,
                };
            }
        }
        return NormalForm {
            word: seen.into_iter().min().unwrap(),
            minimal: true,
            closure_size: explored,
            budget_hit: false,
        };
    }
}

/// Decides `w1 = w2` in the group.
pub fn words_equal(w1: &[usize], w2: &[usize], p: &AbstractCubic, budget: usize) -> Result<bool> {
    let w = concat(w1, &inverse(w2));
    Ok(normal_form(&w, p, budget).into_result(budget)?.is_empty())
}

/// Number of occurrences of `t_x` in a minimal word for `w`.
pub fn ord(w: &[usize], p: &AbstractCubic, x: usize, budget: usize) -> Result<usize> {
    let nf = normal_form(w, p, budget).into_result(budget)?;
    Ok(nf.iter().filter(|&&y| y == x).count())
}

fn counts(w: &[usize]) -> std::collections::BTreeMap<usize, usize> {
    let mut m = std::collections::BTreeMap::new();
    for &x in w {
        *m.entry(x).or_insert(0) += 1;
    }
    m
}

/// Letters occurring in a minimal word.
pub fn delta(w: &[usize], p: &AbstractCubic, budget: usize) -> Result<BTreeSet<usize>> {
    let nf = normal_form(w, p, budget).into_result(budget)?;
    Ok(nf.into_iter().collect())
}

/// Letters occurring an odd number of times in a minimal word.
pub fn delta_tilde(w: &[usize], p: &AbstractCubic, budget: usize) -> Result<BTreeSet<usize>> {
    let nf = normal_form(w, p, budget).into_result(budget)?;
    Ok(counts(&nf)
        .into_iter()
        .filter(|&(_, c)| c % 2 == 1)
        .map(|(x, _)| x)
        .collect())
}

/// An element of the `F_2`-vector space on the point set, stored by support.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PsiVector {
    pub support: BTreeSet<usize>,
}

impl PsiVector {
    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, other: &PsiVector) -> PsiVector {
        PsiVector {
            support: self
                .support
                .symmetric_difference(&other.support)
                .copied()
                .collect(),
        }
    }
}

pub fn psi(w: &[usize], p: &AbstractCubic, budget: usize) -> Result<PsiVector> {
    Ok(PsiVector {
        support: delta_tilde(w, p, budget)?,
    })
}

/// Action of `w = t_{x_1} ... t_{x_n}` on a class of an admissible quotient,
/// where `t_X(Y) = X ∘ Y`. The rightmost letter acts first.
pub fn act_on_quotient(w: &[usize], q: &QuasigroupTable, cls: usize) -> usize {
    w.iter()
        .rev()
        .fold(cls, |y, &x| q.compose(q.class_of(x), y))
}

/// The permutation of quotient classes induced by `w`.
pub fn action_permutation(w: &[usize], q: &QuasigroupTable) -> Vec<usize> {
    (0..q.len()).map(|c| act_on_quotient(w, q, c)).collect()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubgroupKind {
    /// `t_x t_y t_z t_x' t_y t_z'` for collinear `(x, y, z)`, `(x', y, z')`.
    B0,
    /// `t_x t_y t_z` for collinear `(x, y, z)`.
    B1,
    /// `t_x t_y t_x t_y` for `x != y`.
    Commutator,
}

fn ordered_triples(p: &AbstractCubic) -> Vec<[usize; 3]> {
    let mut out = BTreeSet::new();
    for &[a, b, c] in p.triples() {
        for t in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            out.insert(t);
        }
    }
    out.into_iter().collect()
}

/// Generator words of the given family, in lexicographic order, at most
/// `limit` of them.
pub fn subgroup_generators(kind: SubgroupKind, p: &AbstractCubic, limit: usize) -> Vec<Word> {
    let mut out = Vec::new();
    match kind {
        SubgroupKind::B1 => {
            out.extend(ordered_triples(p).into_iter().take(limit).map(|t| t.to_vec()));
        }
        SubgroupKind::B0 => {
            let ts = ordered_triples(p);
            'outer: for s in &ts {
                for t in ts.iter().filter(|t| t[1] == s[1]) {
                    if out.len() >= limit {
                        break 'outer;
                    }
                    out.push(vec![s[0], s[1], s[2], t[0], t[1], t[2]]);
                }
            }
        }
        SubgroupKind::Commutator => {
            'outer: for x in 0..p.len() {
                for y in (0..p.len()).filter(|&y| y != x) {
                    if out.len() >= limit {
                        break 'outer;
                    }
                    out.push(vec![x, y, x, y]);
                }
            }
        }
    }
    out
}
