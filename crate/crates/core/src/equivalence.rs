//! Admissible equivalence relations on an abstract cubic.
//!
//! An equivalence `R` is admissible when every pair of classes composes to a
//! single class. The universal (finest) admissible relation is computed both
//! by a worklist fixpoint and as the limit of explicit approximants, where
//! stage `i + 1` identifies all third points of pairs equivalent at stage `i`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::cubic::AbstractCubic;
use crate::error::{Error, Result};

/// Union-find whose roots are always the least index of their class.
#[derive(Clone, Debug)]
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }

    fn into_partition(mut self) -> Partition {
        let rep = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition { rep }
    }
}

/// An equivalence relation on `0..n`, stored as the least representative of
/// each element's class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    rep: Vec<usize>,
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Partition {
            rep: (0..n).collect(),
        }
    }

    pub fn single_class(n: usize) -> Self {
        Partition { rep: vec![0; n] }
    }

    /// The finest partition containing all `pairs`.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut uf = UnionFind::new(n);
        for (a, b) in pairs {
            if a.max(b) >= n {
                return Err(Error::IndexOutOfRange(a.max(b)));
            }
            uf.union(a, b);
        }
        Ok(uf.into_partition())
    }

    /// Builds a partition from arbitrary class labels.
    pub fn from_labels<T: std::hash::Hash + Eq>(labels: &[T]) -> Self {
        let mut first: HashMap<&T, usize> = HashMap::new();
        let rep = labels
            .iter()
            .enumerate()
            .map(|(i, l)| *first.entry(l).or_insert(i))
            .collect();
        Partition { rep }
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }

    /// Least element of the class of `x`.
    pub fn rep(&self, x: usize) -> usize {
        self.rep[x]
    }

    pub fn reps(&self) -> &[usize] {
        &self.rep
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.rep[x] == self.rep[y]
    }

    pub fn class_count(&self) -> usize {
        self.rep.iter().enumerate().filter(|&(i, &r)| i == r).count()
    }

    /// Classes in order of their least element.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (x, &r) in self.rep.iter().enumerate() {
            m.entry(r).or_default().push(x);
        }
        m.into_values().collect()
    }

    /// Dense class ids `0..class_count()`, ordered by least element.
    pub fn class_ids(&self) -> Vec<usize> {
        let mut id = vec![usize::MAX; self.len()];
        let mut next = 0;
        for x in 0..self.len() {
            let r = self.rep[x];
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            id[x] = id[r];
        }
        id
    }

    /// Whether every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        (0..self.len()).all(|x| other.same(x, self.rep[x]))
    }

    /// Elements equivalent to some element of `set`.
    pub fn expand(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let reps: HashSet<usize> = set.iter().map(|&x| self.rep[x]).collect();
        (0..self.len()).filter(|x| reps.contains(&self.rep[*x])).collect()
    }
}

/// `x ≈ y` in the result iff it holds in both `a` and `b`.
pub fn meet(a: &Partition, b: &Partition) -> Result<Partition> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch("partitions of different sets".into()));
    }
    let keys: Vec<(usize, usize)> = (0..a.len()).map(|x| (a.rep(x), b.rep(x))).collect();
    Ok(Partition::from_labels(&keys))
}

/// Extra constraints imposed on the diagonal during saturation.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Diagonal {
    Free,
    /// `X ∘ X = X`.
    Idempotent,
    /// `X ∘ X = O` for one class `O`.
    Constant,
}

fn pair_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

fn saturate_with(p: &AbstractCubic, mut uf: UnionFind, diag: Diagonal) -> Partition {
    let n = p.len();
    loop {
        let mut changed = false;
        let mut first: HashMap<(usize, usize), usize> = HashMap::new();
        let mut base: Option<usize> = None;
        for u in 0..n {
            for v in u..n {
                let values = p.compose(u, v);
                if values.is_empty() {
                    continue;
                }
                let (ru, rv) = (uf.find(u), uf.find(v));
                let key = pair_key(ru, rv);
                for &z in values {
                    match first.get(&key) {
                        Some(&w) => changed |= uf.union(z, w),
                        None => {
                            first.insert(key, z);
                        }
                    }
                    if ru == rv {
                        match diag {
                            Diagonal::Free => {}
                            Diagonal::Idempotent => changed |= uf.union(z, u),
                            Diagonal::Constant => match base {
                                Some(o) => changed |= uf.union(z, o),
                                None => base = Some(z),
                            },
                        }
                    }
                }
            }
        }
        if !changed {
            return uf.into_partition();
        }
    }
}

/// The finest admissible equivalence containing `seed`.
pub fn saturate(p: &AbstractCubic, seed: &[(usize, usize)]) -> Result<Partition> {
    let mut uf = UnionFind::new(p.len());
    for &(a, b) in seed {
        if a.max(b) >= p.len() {
            return Err(Error::IndexOutOfRange(a.max(b)));
        }
        uf.union(a, b);
    }
    Ok(saturate_with(p, uf, Diagonal::Free))
}

/// The staged approximants of the universal equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationTrace {
    pub stages: Vec<Partition>,
    /// First stage equal to its successor.
    pub stabilized_at: usize,
}

impl SaturationTrace {
    pub fn class_counts(&self) -> Vec<usize> {
        self.stages.iter().map(Partition::class_count).collect()
    }
}

/// Stage `i + 1` from stage `i`: `x ~ x'` when `x ∈ u ∘ v`, `x' ∈ u' ∘ v'`
/// with `u, u'` and `v, v'` equivalent at stage `i`.
pub fn next_stage(p: &AbstractCubic, prev: &Partition) -> Partition {
    let n = p.len();
    let mut uf = UnionFind::new(n);
    let mut first: HashMap<(usize, usize), usize> = HashMap::new();
    for u in 0..n {
        for v in u..n {
            let key = pair_key(prev.rep(u), prev.rep(v));
            for &z in p.compose(u, v) {
                match first.get(&key) {
                    Some(&w) => {
                        uf.union(z, w);
                    }
                    None => {
                        first.insert(key, z);
                    }
                }
            }
        }
    }
    uf.into_partition()
}

/// The universal admissible equivalence, with its approximants.
pub fn universal(p: &AbstractCubic) -> (Partition, SaturationTrace) {
    let mut stages = vec![Partition::identity(p.len())];
    loop {
        let next = next_stage(p, stages.last().unwrap());
        if &next == stages.last().unwrap() {
            let stabilized_at = stages.len() - 1;
            stages.push(next.clone());
            return (next, SaturationTrace { stages, stabilized_at });
        }
        stages.push(next);
    }
}

/// The stage-`i` approximant (`None` for the limit).
pub fn approximant(p: &AbstractCubic, stage: Option<usize>) -> Partition {
    match stage {
        None => universal(p).0,
        Some(i) => {
            let mut r = Partition::identity(p.len());
            for _ in 0..i {
                let next = next_stage(p, &r);
                if next == r {
                    break;
                }
                r = next;
            }
            r
        }
    }
}

/// The finest admissible equivalence whose quotient satisfies `X ∘ X = X`.
pub fn u3(p: &AbstractCubic) -> Partition {
    saturate_with(p, UnionFind::new(p.len()), Diagonal::Idempotent)
}

/// The finest admissible equivalence whose quotient satisfies `X ∘ X = O`
/// for a single class `O`.
pub fn u2(p: &AbstractCubic) -> Result<Partition> {
    if (0..p.len()).all(|x| p.compose(x, x).is_empty()) {
        return Err(Error::NoDiagonal);
    }
    Ok(saturate_with(p, UnionFind::new(p.len()), Diagonal::Constant))
}

/// Class-level composition: for each unordered pair of classes, the set of
/// classes of representative compositions.
fn class_compositions(p: &AbstractCubic, r: &Partition) -> BTreeMap<(usize, usize), BTreeSet<usize>> {
    let mut out: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for u in 0..p.len() {
        for v in u..p.len() {
            let values = p.compose(u, v);
            if values.is_empty() {
                continue;
            }
            let e = out.entry(pair_key(r.rep(u), r.rep(v))).or_default();
            e.extend(values.iter().map(|&z| r.rep(z)));
        }
    }
    out
}

/// Admissibility: every pair of classes composes into at most one class, and
/// with `strict`, into exactly one.
pub fn is_admissible(p: &AbstractCubic, r: &Partition, strict: bool) -> bool {
    let comp = class_compositions(p, r);
    if comp.values().any(|s| s.len() > 1) {
        return false;
    }
    if strict {
        let k = r.class_count();
        return comp.len() == k * (k + 1) / 2;
    }
    true
}

/// Composition table of a quotient by an admissible equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasigroupTable {
    m: usize,
    table: Vec<usize>,
    class_of: Vec<usize>,
}

impl QuasigroupTable {
    /// A table on `m` abstract elements; each element is its own class.
    pub fn from_table(m: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != m * m {
            return Err(Error::DimensionMismatch(format!("{} entries for {m}x{m}", table.len())));
        }
        if let Some(&bad) = table.iter().find(|&&c| c >= m) {
            return Err(Error::IndexOutOfRange(bad));
        }
        Ok(QuasigroupTable {
            m,
            table,
            class_of: (0..m).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.table[a * self.m + b]
    }

    /// Class of a point of the underlying cubic.
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.m.max(1)).map(<[usize]>::to_vec).collect()
    }

    /// Sub-quasigroup generated by `gens`.
    pub fn generated(&self, gens: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut set = gens.clone();
        loop {
            let items: Vec<usize> = set.iter().copied().collect();
            let mut grew = false;
            for &a in &items {
                for &b in &items {
                    grew |= set.insert(self.compose(a, b));
                }
            }
            if !grew {
                return set;
            }
        }
    }
}

/// Quotient of `p` by `r`; fails unless `r` is admissible and every pair of
/// classes composes.
pub fn quotient(p: &AbstractCubic, r: &Partition) -> Result<QuasigroupTable> {
    if r.len() != p.len() {
        return Err(Error::DimensionMismatch("partition of a different set".into()));
    }
    let ids = r.class_ids();
    let m = r.class_count();
    let comp = class_compositions(p, r);
    if comp.values().any(|s| s.len() > 1) {
        return Err(Error::NotAdmissible);
    }
    let reps: Vec<usize> = r.classes().iter().map(|c| c[0]).collect();
    let mut table = vec![0; m * m];
    for a in 0..m {
        for b in a..m {
            let values = comp
                .get(&pair_key(reps[a], reps[b]))
                .ok_or(Error::PartialQuotient(a, b))?;
            let c = ids[*values.iter().next().unwrap()];
            table[a * m + b] = c;
            table[b * m + a] = c;
        }
    }
    Ok(QuasigroupTable {
        m,
        table,
        class_of: ids,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChReport {
    pub commutativity_failures: usize,
    pub symmetry_failures: usize,
    /// Sub-quasigroups checked, one per distinct generated set.
    pub subquasigroups: usize,
    /// `(sub-quasigroup, identity)` pairs whose induced law is not an
    /// abelian group.
    pub group_failures: Vec<(Vec<usize>, usize)>,
}

impl ChReport {
    pub fn passed(&self) -> bool {
        self.commutativity_failures == 0
            && self.symmetry_failures == 0
            && self.group_failures.is_empty()
    }
}

fn is_group(q: &QuasigroupTable, s: &[usize], e: usize) -> bool {
    let add = |x: usize, y: usize| q.compose(e, q.compose(x, y));
    for &x in s {
        if add(x, e) != x || !s.iter().any(|&y| add(x, y) == e) {
            return false;
        }
        for &y in s {
            let xy = add(x, y);
            if s.iter().any(|&z| add(xy, z) != add(x, add(y, z))) {
                return false;
            }
        }
    }
    true
}

/// Checks `X ∘ Y = Y ∘ X`, `X ∘ (X ∘ Y) = Y`, and that every sub-quasigroup
/// generated by at most three elements is an abelian group under
/// `x + y = e ∘ (x ∘ y)` for each choice of `e` in it.
pub fn ch_axioms_check(q: &QuasigroupTable) -> ChReport {
    let m = q.len();
    let mut report = ChReport::default();
    for a in 0..m {
        for b in 0..m {
            if q.compose(a, b) != q.compose(b, a) {
                report.commutativity_failures += 1;
            }
            if q.compose(a, q.compose(a, b)) != b {
                report.symmetry_failures += 1;
            }
        }
    }
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::new();
    for a in 0..m {
        for b in a..m {
            for c in b..m {
                let s = q.generated(&BTreeSet::from([a, b, c]));
                if seen.contains(&s) {
                    continue;
                }
                let items: Vec<usize> = s.iter().copied().collect();
                for &e in &items {
                    if !is_group(q, &items, e) {
                        report.group_failures.push((items.clone(), e));
                    }
                }
                seen.insert(s);
            }
        }
    }
    report.subquasigroups = seen.len();
    report
}

/// Whether `t_x t_y` acts trivially on the quotient.
pub fn universal_pair_via_action(q: &QuasigroupTable, x: usize, y: usize) -> bool {
    let (cx, cy) = (q.class_of(x), q.class_of(y));
    (0..q.len()).all(|c| q.compose(cx, q.compose(cy, c)) == c)
}
