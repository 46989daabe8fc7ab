//! Generation of point sets by repeated composition.
//!
//! A round-based closure computes the union of all values of all
//! nonassociative words in the seed, under one of several rules.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cubic::AbstractCubic;
use crate::equivalence::{approximant, quotient, universal, Partition};
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// All values of `x ∘ y`, `x = y` allowed.
    Standard,
    /// Only `x ∘ y` with `x != y`.
    DistinctOnly,
    /// Values up to the stage-`i` approximant (`None`: the universal
    /// equivalence).
    RuleA(Option<usize>),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Standard => write!(f, "std"),
            Rule::DistinctOnly => write!(f, "distinct"),
            Rule::RuleA(Some(i)) => write!(f, "a:{i}"),
            Rule::RuleA(None) => write!(f, "a:inf"),
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "std" => Ok(Rule::Standard),
            "distinct" => Ok(Rule::DistinctOnly),
            "a:inf" => Ok(Rule::RuleA(None)),
            _ => s
                .strip_prefix("a:")
                .and_then(|i| i.parse().ok())
                .map(|i| Rule::RuleA(Some(i)))
                .ok_or_else(|| Error::InvalidInput(format!("unknown rule {s:?}"))),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureConfig {
    pub rule: Rule,
    pub max_rounds: usize,
    pub max_set: usize,
}

impl ClosureConfig {
    pub fn new(rule: Rule) -> Self {
        ClosureConfig {
            rule,
            max_rounds: 10_000,
            max_set: usize::MAX,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureResult {
    pub reached: BTreeSet<usize>,
    pub rounds: usize,
    /// A fixpoint was reached before any cap.
    pub complete: bool,
    pub generated_all: bool,
}

/// Closes `seed` under `step`, one round at a time.
pub(crate) fn run_closure(
    n: usize,
    seed: &BTreeSet<usize>,
    max_rounds: usize,
    max_set: usize,
    mut step: impl FnMut(&BTreeSet<usize>) -> BTreeSet<usize>,
) -> ClosureResult {
    let mut reached = seed.clone();
    let mut rounds = 0;
    let complete = loop {
        if rounds >= max_rounds || reached.len() > max_set {
            break false;
        }
        rounds += 1;
        let new: Vec<usize> = step(&reached)
            .into_iter()
            .filter(|z| !reached.contains(z))
            .collect();
        if new.is_empty() {
            break true;
        }
        reached.extend(new);
    };
    let generated_all = reached.len() == n;
    ClosureResult {
        reached,
        rounds,
        complete,
        generated_all,
    }
}

fn check_seed(p: &AbstractCubic, seed: &BTreeSet<usize>) -> Result<()> {
    if seed.is_empty() {
        return Err(Error::InvalidInput("empty seed".into()));
    }
    match seed.iter().find(|&&x| x >= p.len()) {
        Some(&bad) => Err(Error::IndexOutOfRange(bad)),
        None => Ok(()),
    }
}

/// Closure under a rule, with the approximant for `RuleA` supplied by the
/// caller.
pub fn closure_with(
    p: &AbstractCubic,
    seed: &BTreeSet<usize>,
    cfg: &ClosureConfig,
    approx: Option<&Partition>,
) -> Result<ClosureResult> {
    check_seed(p, seed)?;
    let distinct = cfg.rule == Rule::DistinctOnly;
    let expand = |s: BTreeSet<usize>| match approx {
        Some(r) if matches!(cfg.rule, Rule::RuleA(_)) => r.expand(&s),
        _ => s,
    };
    let seed = expand(seed.clone());
    Ok(run_closure(p.len(), &seed, cfg.max_rounds, cfg.max_set, |reached| {
        let items: Vec<usize> = reached.iter().copied().collect();
        let mut out = BTreeSet::new();
        for (i, &x) in items.iter().enumerate() {
            let start = if distinct { i + 1 } else { i };
            for &y in &items[start..] {
                out.extend(p.compose(x, y).iter().copied());
            }
        }
        expand(out)
    }))
}

pub fn closure(p: &AbstractCubic, seed: &BTreeSet<usize>, cfg: &ClosureConfig) -> Result<ClosureResult> {
    match cfg.rule {
        Rule::RuleA(stage) => closure_with(p, seed, cfg, Some(&approximant(p, stage))),
        _ => closure_with(p, seed, cfg, None),
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationIndex {
    pub index: usize,
    pub seed: Vec<usize>,
}

/// The least stage `i <= max_i` at which some seed of at most `seed_budget`
/// points generates everything under rule `A_i`, searching seeds by size and
/// then lexicographically.
pub fn generation_index(
    p: &AbstractCubic,
    seed_budget: usize,
    max_i: usize,
) -> Result<Option<GenerationIndex>> {
    let mut r = Partition::identity(p.len());
    for i in 0..=max_i {
        if i > 0 {
            r = crate::equivalence::next_stage(p, &r);
        }
        let cfg = ClosureConfig::new(Rule::RuleA(Some(i)));
        for k in 1..=seed_budget.min(p.len()) {
            for seed in combinations(p.len(), k) {
                let s: BTreeSet<usize> = seed.iter().copied().collect();
                let res = closure_with(p, &s, &cfg, Some(&r))?;
                if res.generated_all {
                    return Ok(Some(GenerationIndex { index: i, seed }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Holds,
    /// The premise is false.
    Vacuous,
    Fails,
}

impl Outcome {
    fn of(premise: bool, conclusion: bool) -> Self {
        match (premise, conclusion) {
            (false, _) => Outcome::Vacuous,
            (true, true) => Outcome::Holds,
            (true, false) => Outcome::Fails,
        }
    }

    pub fn ok(self) -> bool {
        self != Outcome::Fails
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationClaimReport {
    /// Generation of the points implies generation of the quotient.
    pub forward: Outcome,
    /// Generation of the quotient implies generation under `A_∞`.
    pub converse: Outcome,
}

/// Checks both directions relating generation of the points by `seed` and
/// generation of the universal quotient by the classes of `seed`.
pub fn claim_341_check(p: &AbstractCubic, seed: &BTreeSet<usize>) -> Result<GenerationClaimReport> {
    let (u, _) = universal(p);
    let q = quotient(p, &u)?;
    let std = closure_with(p, seed, &ClosureConfig::new(Rule::Standard), None)?;
    let classes: BTreeSet<usize> = seed.iter().map(|&x| q.class_of(x)).collect();
    let quotient_generated = q.generated(&classes).len() == q.len();
    let a_inf = closure_with(p, seed, &ClosureConfig::new(Rule::RuleA(None)), Some(&u))?;
    Ok(GenerationClaimReport {
        forward: Outcome::of(std.generated_all, quotient_generated),
        converse: Outcome::of(quotient_generated, a_inf.generated_all),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve3() -> AbstractCubic {
        AbstractCubic::from_triples(3, [[0, 1, 2], [0, 0, 0], [1, 1, 1], [2, 2, 2]]).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn three_point_curve_closures() {
        let p = curve3();
        let r = closure(&p, &set(&[0]), &ClosureConfig::new(Rule::Standard)).unwrap();
        assert_eq!(r.reached, set(&[0]));
        let r = closure(&p, &set(&[0, 1]), &ClosureConfig::new(Rule::DistinctOnly)).unwrap();
        assert!(r.generated_all && r.complete);
        let r = closure(&p, &set(&[0, 1, 2]), &ClosureConfig::new(Rule::Standard)).unwrap();
        assert_eq!((r.rounds, r.complete), (1, true));
    }

    #[test]
    fn caps_are_reported() {
        let p = curve3();
        let cfg = ClosureConfig {
            max_rounds: 0,
            ..ClosureConfig::new(Rule::Standard)
        };
        assert!(!closure(&p, &set(&[0, 1]), &cfg).unwrap().complete);
        assert!(closure(&p, &set(&[]), &cfg).is_err());
    }

    #[test]
    fn generation_indices() {
        let p = curve3();
        assert_eq!(
            generation_index(&p, 2, 3).unwrap(),
            Some(GenerationIndex { index: 0, seed: vec![0, 1] })
        );
        let one = AbstractCubic::from_triples(1, [[0, 0, 0]]).unwrap();
        assert_eq!(generation_index(&one, 1, 0).unwrap().unwrap().seed, vec![0]);
        let two = AbstractCubic::from_triples(2, []).unwrap();
        assert_eq!(generation_index(&two, 1, 3).unwrap(), None);
    }

    #[test]
    fn claim_directions() {
        let p = curve3();
        let r = claim_341_check(&p, &set(&[0, 1])).unwrap();
        assert_eq!((r.forward, r.converse), (Outcome::Holds, Outcome::Holds));
        let r = claim_341_check(&p, &set(&[0])).unwrap();
        assert_eq!((r.forward, r.converse), (Outcome::Vacuous, Outcome::Vacuous));
    }

    #[test]
    fn rule_parsing() {
        for s in ["std", "distinct", "a:0", "a:7", "a:inf"] {
            assert_eq!(s.parse::<Rule>().unwrap().to_string(), s);
        }
        assert!("a:x".parse::<Rule>().is_err());
    }

    #[test]
    fn combinations_are_lexicographic() {
        let c: Vec<Vec<usize>> = combinations(4, 2).collect();
        assert_eq!(c, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(2, 3).count(), 0);
        assert_eq!(combinations(3, 0).count(), 1);
    }
}
