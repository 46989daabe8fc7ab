//! Abstract cubics: a finite set with a symmetric ternary collinearity
//! relation and its multivalued composition law.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ProjPoint;

pub type Triple = [usize; 3];

fn sorted(mut t: Triple) -> Triple {
    t.sort_unstable();
    t
}

fn pair(x: usize, y: usize) -> (usize, usize) {
    (x.min(y), x.max(y))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractCubic {
    n: usize,
    triples: BTreeSet<Triple>,
    line_pairs: BTreeSet<(usize, usize)>,
    compose: Vec<Vec<usize>>,
    labels: Option<Vec<ProjPoint>>,
}

#[derive(Serialize, Deserialize)]
struct Repr {
    n: usize,
    triples: Vec<Triple>,
    line_pairs: Vec<(usize, usize)>,
}

/// A failure of the functionality axiom: distinct points with several
/// third points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub x: usize,
    pub y: usize,
    pub values: Vec<usize>,
    pub flagged: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub strict: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl AbstractCubic {
    /// Builds the relation generated by `triples` under permutations.
    pub fn from_triples(n: usize, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        let mut c = AbstractCubic {
            n,
            triples: BTreeSet::new(),
            line_pairs: BTreeSet::new(),
            compose: vec![Vec::new(); n * n],
            labels: None,
        };
        for t in triples {
            c.insert(t)?;
        }
        Ok(c)
    }

    /// Marks pairs lying on a line contained in the source surface; those are
    /// exempt from functionality in lenient validation.
    pub fn with_line_pairs(
        mut self,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        for (x, y) in pairs {
            if x.max(y) >= self.n {
                return Err(Error::IndexOutOfRange(x.max(y)));
            }
            if x != y {
                self.line_pairs.insert(pair(x, y));
            }
        }
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<ProjPoint>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} points",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    fn insert(&mut self, t: Triple) -> Result<()> {
        if let Some(&bad) = t.iter().find(|&&i| i >= self.n) {
            return Err(Error::IndexOutOfRange(bad));
        }
        let t = sorted(t);
        if !self.triples.insert(t) {
            return Ok(());
        }
        let [a, b, c] = t;
        for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
            self.add_value(x, y, z);
            if x != y {
                self.add_value(y, x, z);
            }
        }
        Ok(())
    }

    fn add_value(&mut self, x: usize, y: usize, z: usize) {
        let v = &mut self.compose[x * self.n + y];
        if let Err(pos) = v.binary_search(&z) {
            v.insert(pos, z);
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    pub fn contains(&self, t: Triple) -> bool {
        self.triples.contains(&sorted(t))
    }

    pub fn line_pairs(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.line_pairs.iter()
    }

    pub fn is_line_pair(&self, x: usize, y: usize) -> bool {
        self.line_pairs.contains(&pair(x, y))
    }

    pub fn labels(&self) -> Option<&[ProjPoint]> {
        self.labels.as_deref()
    }

    /// `{z : (x, y, z) in L}`, sorted.
    pub fn compose(&self, x: usize, y: usize) -> &[usize] {
        &self.compose[x * self.n + y]
    }

    pub fn validate(&self, strict: bool) -> ValidationReport {
        let mut violations = Vec::new();
        for x in 0..self.n {
            for y in x + 1..self.n {
                let values = self.compose(x, y);
                if values.len() > 1 {
                    let flagged = self.is_line_pair(x, y);
                    if strict || !flagged {
                        violations.push(Violation {
                            x,
                            y,
                            values: values.to_vec(),
                            flagged,
                        });
                    }
                }
            }
        }
        ValidationReport { strict, violations }
    }

    /// Every pair, the diagonal included, has exactly one third point.
    pub fn is_total_single_valued(&self) -> bool {
        self.compose.iter().all(|v| v.len() == 1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(Repr {
            n: self.n,
            triples: self.triples.iter().copied().collect(),
            line_pairs: self.line_pairs.iter().copied().collect(),
        })
        .expect("cubic serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let r: Repr = serde_json::from_value(v.clone())?;
        AbstractCubic::from_triples(r.n, r.triples)?.with_line_pairs(r.line_pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_cubic() {
        let c = AbstractCubic::from_triples(1, [[0, 0, 0]]).unwrap();
        assert!(c.validate(true).is_valid());
        assert_eq!(c.compose(0, 0), &[0]);
        assert!(c.is_total_single_valued());
    }

    #[test]
    fn permutation_closure_and_dedup() {
        let c = AbstractCubic::from_triples(3, [[2, 0, 1], [0, 1, 2], [1, 2, 0]]).unwrap();
        assert_eq!(c.triple_count(), 1);
        assert_eq!(c.compose(0, 1), &[2]);
        assert_eq!(c.compose(1, 0), &[2]);
        assert_eq!(c.compose(2, 1), &[0]);
        assert!(c.compose(0, 0).is_empty());
        assert!(!c.is_total_single_valued());
    }

    #[test]
    fn functionality_violations() {
        let c = AbstractCubic::from_triples(4, [[0, 1, 2], [0, 1, 3]]).unwrap();
        let r = c.validate(false);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].values, vec![2, 3]);
        let c = c.with_line_pairs([(1, 0)]).unwrap();
        assert!(c.validate(false).is_valid());
        assert!(!c.validate(true).is_valid());
    }

    #[test]
    fn empty_relation() {
        let c = AbstractCubic::from_triples(2, []).unwrap();
        assert!(c.compose(0, 1).is_empty());
        assert!(!c.is_total_single_valued());
        assert_eq!(
            AbstractCubic::from_triples(2, [[0, 1, 2]]).unwrap_err(),
            Error::IndexOutOfRange(2)
        );
    }

    #[test]
    fn json_round_trip() {
        let c = AbstractCubic::from_triples(4, [[0, 1, 2], [0, 1, 3], [3, 3, 3]])
            .unwrap()
            .with_line_pairs([(0, 1)])
            .unwrap();
        let v = c.to_json();
        assert_eq!(
            v,
            serde_json::json!({"n": 4, "triples": [[0,1,2],[0,1,3],[3,3,3]], "line_pairs": [[0,1]]})
        );
        assert_eq!(AbstractCubic::from_json(&v).unwrap(), c);
    }
}
