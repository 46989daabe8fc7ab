//! Split cubic surfaces as blow-ups of six points of the plane.
//!
//! The cubics through six points in general position span a 4-dimensional
//! space; the map `u -> (F_0(u) : ... : F_3(u))` embeds the blown-up plane
//! as a smooth cubic surface `V` in `P^3`. Its inverse `p: V -> P^2`
//! contracts six exceptional lines `E_i` onto the base points. The section
//! of `V` by a plane `sum t_j X_j = 0` is carried by `p` onto the plane
//! cubic `sum t_j F_j`, which gives the modified composition
//! `x ∘_(C,p) y = p^{-1}(p(x) ∘ p(y))` exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::equivalence::{u3, Partition};
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::generation::{combinations, run_closure, ClosureResult};
use crate::geometry::{
    collinearity, enumerate_planes, enumerate_proj_points, CompositionTable, CubicForm, Line,
    Plane, PlaneCubic, ProjPoint, ThirdResult,
};
use crate::linalg::{self, Row};
use crate::poly::{monomials, HomPoly};

/// Six points of `P^2` with no three collinear and not on one conic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseConfig {
    pub field: FieldSpec,
    pub points: [ProjPoint; 6],
}

#[derive(Serialize, Deserialize)]
struct BaseRepr {
    field: FieldSpec,
    base_points: Vec<Vec<Vec<u32>>>,
}

impl BaseConfig {
    pub fn new(field: &FieldSpec, points: [ProjPoint; 6]) -> Result<Self> {
        if !check_general_position(field, &points)? {
            return Err(Error::NotGeneralPosition);
        }
        Ok(BaseConfig {
            field: field.clone(),
            points,
        })
    }

    /// The four standard points followed by the first pair (in canonical
    /// order) completing them to a configuration in general position.
    pub fn search(field: &FieldSpec) -> Result<Self> {
        let std4 = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
            .map(|c| ProjPoint::from_ints(field, &c).unwrap());
        let all = enumerate_proj_points(2, field);
        let rest: Vec<ProjPoint> = all.iter().filter(|p| !std4.contains(p)).copied().collect();
        for pair in combinations(rest.len(), 2) {
            let pts = [std4[0], std4[1], std4[2], std4[3], rest[pair[0]], rest[pair[1]]];
            if check_general_position(field, &pts)? {
                return Ok(BaseConfig {
                    field: field.clone(),
                    points: pts,
                });
            }
        }
        Err(Error::NotGeneralPosition)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BaseRepr {
            field: self.field.clone(),
            base_points: self.points.iter().map(|p| p.to_json(&self.field)).collect(),
        })
        .expect("config serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let r: BaseRepr = serde_json::from_value(v.clone())?;
        let pts: Result<Vec<ProjPoint>> =
            r.base_points.iter().map(|c| ProjPoint::from_json(&r.field, c)).collect();
        let pts: [ProjPoint; 6] = pts?
            .try_into()
            .map_err(|_| Error::InvalidInput("expected 6 base points".into()))?;
        BaseConfig::new(&r.field, pts)
    }
}

fn conic_row(f: &FieldSpec, p: &ProjPoint) -> Row {
    let c = p.coords();
    monomials(3, 2)
        .iter()
        .map(|e| (0..3).fold(f.one(), |acc, i| f.mul(acc, f.pow(c[i], e[i] as u64))))
        .collect()
}

/// No three of the six points collinear and no conic through all six.
pub fn check_general_position(f: &FieldSpec, pts: &[ProjPoint]) -> Result<bool> {
    if pts.len() != 6 || pts.iter().any(|p| p.dim() != 2) {
        return Err(Error::InvalidInput("expected 6 points of P^2".into()));
    }
    let distinct: BTreeSet<&ProjPoint> = pts.iter().collect();
    if distinct.len() != 6 {
        return Err(Error::InvalidInput("repeated base point".into()));
    }
    for t in combinations(6, 3) {
        let row = |i: usize| {
            let c = pts[t[i]].coords();
            [c[0], c[1], c[2]]
        };
        if linalg::det3(f, [row(0), row(1), row(2)]).is_zero() {
            return Ok(false);
        }
    }
    let rows: Vec<Row> = pts.iter().map(|p| conic_row(f, p)).collect();
    Ok(linalg::rank(f, &rows) == 6)
}

/// Result of a modified composition.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CpResult {
    pub point: ProjPoint,
    /// Index of the exceptional line the point lies on, if any.
    pub exceptional: Option<usize>,
}

/// `p^{-1}(l)` for a line `l` of the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedCubic {
    pub line: Line,
    /// Points of `p^{-1}(l)` off the exceptional lines, sorted.
    pub points: Vec<ProjPoint>,
    /// Base points lying on `l`; their exceptional lines are excluded.
    pub base_points_on_line: Vec<usize>,
}

/// Three lines on a surface: `l1`, `l2` skew, `m` meeting both.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct LineTriple {
    pub l1: Line,
    pub l2: Line,
    pub m: Line,
}

fn span_rank(f: &FieldSpec, lines: &[&Line]) -> usize {
    let rows: Vec<Row> = lines
        .iter()
        .flat_map(|l| {
            let (a, b) = l.basis();
            [a.coords().to_vec(), b.coords().to_vec()]
        })
        .collect();
    linalg::rank(f, &rows)
}

impl LineTriple {
    pub fn new(form: &CubicForm, l1: Line, l2: Line, m: Line) -> Result<Self> {
        let f = form.field();
        if ![l1, l2, m].iter().all(|l| form.contains_line(l)) {
            return Err(Error::Hypothesis("a line of the triple is not on the surface".into()));
        }
        if span_rank(f, &[&l1, &l2]) != 4 {
            return Err(Error::Hypothesis("l1 and l2 meet".into()));
        }
        if span_rank(f, &[&l1, &m]) != 3 || span_rank(f, &[&l2, &m]) != 3 {
            return Err(Error::Hypothesis("m does not meet both l1 and l2".into()));
        }
        Ok(LineTriple { l1, l2, m })
    }
}

/// Composition on the plane section `c` of two points of its plane.
pub fn section_compose(c: &PlaneCubic, a: &ProjPoint, b: &ProjPoint) -> Result<ProjPoint> {
    match c.curve_third(&c.push(a)?, &c.push(b)?)? {
        ThirdResult::Unique(z) => Ok(c.pull(&z)),
        _ => Err(Error::Undefined("composition along a line of the section".into())),
    }
}

/// `(x ∘ y) ∘ [z ∘ (u ∘ w)]` with `x, y, z` the points where `T` meets the
/// lines of `lambda`, all compositions taken on the section by `T`.
pub fn compose_t_lambda(
    form: &CubicForm,
    lambda: &LineTriple,
    t: &Plane,
    u: &ProjPoint,
    w: &ProjPoint,
) -> Result<ProjPoint> {
    let f = form.field();
    let meet = |l: &Line| {
        t.meet_line(f, l)
            .ok_or_else(|| Error::Degenerate("the plane contains a line of the triple".into()))
    };
    let (x, y, z) = (meet(&lambda.l1)?, meet(&lambda.l2)?, meet(&lambda.m)?);
    let c = form.plane_section(t)?;
    let xy = section_compose(&c, &x, &y)?;
    let uw = section_compose(&c, u, w)?;
    let zuw = section_compose(&c, &z, &uw)?;
    section_compose(&c, &xy, &zuw)
}

#[derive(Debug)]
pub struct SplitSurface {
    base: BaseConfig,
    system: Vec<CubicForm>,
    surface: CubicForm,
    forward: HashMap<ProjPoint, ProjPoint>,
    inverse: HashMap<ProjPoint, ProjPoint>,
    complement: Vec<ProjPoint>,
    exceptional: [Line; 6],
    pair_table: OnceLock<Vec<Vec<usize>>>,
}

impl SplitSurface {
    pub fn build(base: BaseConfig) -> Result<Self> {
        let f = base.field.clone();
        let cubic_monos = monomials(3, 3);
        let rows: Vec<Row> = base
            .points
            .iter()
            .map(|p| {
                cubic_monos
                    .iter()
                    .map(|e| {
                        let c = p.coords();
                        (0..3).fold(f.one(), |acc, i| f.mul(acc, f.pow(c[i], e[i] as u64)))
                    })
                    .collect()
            })
            .collect();
        let kernel = linalg::nullspace(&f, &rows, cubic_monos.len());
        if kernel.len() != 4 {
            return Err(Error::Degenerate(format!(
                "cubics through the base points form a space of dimension {}",
                kernel.len()
            )));
        }
        let system: Vec<CubicForm> = kernel
            .into_iter()
            .map(|k| CubicForm::new(&f, 2, k))
            .collect::<Result<_>>()?;
        let surface = implicit_equation(&f, &system)?;
        if !surface.is_smooth() {
            return Err(Error::Hypothesis("the blown-up surface is singular".into()));
        }

        let mut forward = HashMap::new();
        let mut inverse = HashMap::new();
        for u in enumerate_proj_points(2, &f).iter() {
            if base.points.contains(u) {
                continue;
            }
            let v: Vec<FieldElem> = system.iter().map(|g| g.eval(u)).collect();
            let x = ProjPoint::new(&f, &v)
                .map_err(|_| Error::Degenerate("linear system has an extra base point".into()))?;
            debug_assert!(surface.contains(&x));
            if inverse.insert(x, *u).is_some() {
                return Err(Error::Degenerate("forward map is not injective".into()));
            }
            forward.insert(*u, x);
        }
        let mut complement: Vec<ProjPoint> = inverse.keys().copied().collect();
        complement.sort();

        let exceptional = base.points.map(|p| exceptional_line(&f, &system, &p));
        for e in &exceptional {
            if !surface.contains_line(e) {
                return Err(Error::Degenerate("exceptional line not on the surface".into()));
            }
        }
        Ok(SplitSurface {
            base,
            system,
            surface,
            forward,
            inverse,
            complement,
            exceptional,
            pair_table: OnceLock::new(),
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.base.field
    }

    pub fn base(&self) -> &BaseConfig {
        &self.base
    }

    pub fn system(&self) -> &[CubicForm] {
        &self.system
    }

    pub fn surface(&self) -> &CubicForm {
        &self.surface
    }

    pub fn exceptional(&self) -> &[Line; 6] {
        &self.exceptional
    }

    /// Rational points off the exceptional lines, sorted.
    pub fn complement(&self) -> &[ProjPoint] {
        &self.complement
    }

    pub fn complement_index(&self, x: &ProjPoint) -> Option<usize> {
        self.complement.binary_search(x).ok()
    }

    pub fn forward(&self, u: &ProjPoint) -> Option<ProjPoint> {
        self.forward.get(u).copied()
    }

    pub fn exceptional_index(&self, x: &ProjPoint) -> Option<usize> {
        let f = self.field();
        self.exceptional.iter().position(|e| e.contains(f, x))
    }

    /// `p(x)` for a rational point of the surface, sending `E_i` to the
    /// `i`-th base point.
    pub fn project(&self, x: &ProjPoint) -> Option<ProjPoint> {
        if let Some(u) = self.inverse.get(x) {
            return Some(*u);
        }
        if !self.surface.contains(x) {
            return None;
        }
        self.exceptional_index(x).map(|i| self.base.points[i])
    }

    /// The plane cubic `p(C)` for the section `C` by `t`.
    pub fn image_curve(&self, t: &Plane) -> Result<PlaneCubic> {
        let f = self.field();
        if let Some(i) = self.exceptional.iter().position(|e| t.contains_line(f, e)) {
            return Err(Error::Hypothesis(format!(
                "the section contains exceptional line {i}"
            )));
        }
        let mut poly = HomPoly::zero(3, 3);
        for (g, &c) in self.system.iter().zip(t.coeffs()) {
            poly = poly.add(f, &g.poly().scale(f, c));
        }
        PlaneCubic::new(CubicForm::from_poly(f, poly)?)
    }

    fn lift(&self, t: &Plane, w: &ProjPoint) -> Result<CpResult> {
        match self.base.points.iter().position(|b| b == w) {
            Some(i) => Ok(CpResult {
                point: t.meet_line(self.field(), &self.exceptional[i]).unwrap(),
                exceptional: Some(i),
            }),
            None => Ok(CpResult {
                point: self.forward[w],
                exceptional: None,
            }),
        }
    }

    /// `x ∘_(C,p) y = p^{-1}(p(x) ∘ p(y))` on the section by `t`.
    pub fn compose_cp(&self, t: &Plane, x: &ProjPoint, y: &ProjPoint) -> Result<CpResult> {
        let f = self.field();
        for a in [x, y] {
            if !t.contains(f, a) || !self.surface.contains(a) {
                return Err(Error::InvalidPoint(format!("{a:?} is not on the section")));
            }
        }
        let d = self.image_curve(t)?;
        self.compose_on(&d, t, x, y)
    }

    fn compose_on(&self, d: &PlaneCubic, t: &Plane, x: &ProjPoint, y: &ProjPoint) -> Result<CpResult> {
        let px = self.project(x).unwrap();
        let py = self.project(y).unwrap();
        match d.curve_third(&px, &py)? {
            ThirdResult::Unique(w) => self.lift(t, &w),
            _ => Err(Error::Undefined("image composition along a line".into())),
        }
    }

    /// The point of `E_i` reached by leaving the `i`-th base point in
    /// direction `v`.
    pub fn exceptional_point(&self, i: usize, v: &[FieldElem]) -> Result<ProjPoint> {
        let p = self.base.points[i];
        let img: Vec<FieldElem> = self.system.iter().map(|g| g.polar(p.coords(), v)).collect();
        ProjPoint::new(self.field(), &img)
            .map_err(|_| Error::Degenerate("direction through the base point itself".into()))
    }

    /// The strict transform of the line through base points `i` and `j`.
    pub fn base_line(&self, i: usize, j: usize) -> Line {
        let (pi, pj) = (self.base.points[i], self.base.points[j]);
        let a = self.exceptional_point(i, pj.coords()).unwrap();
        let b = self.exceptional_point(j, pi.coords()).unwrap();
        Line::through(self.field(), &a, &b).unwrap()
    }

    /// The strict transform of the conic through all base points but `j`.
    pub fn conic_line(&self, j: usize) -> Line {
        let f = self.field();
        let others: Vec<usize> = (0..6).filter(|&i| i != j).collect();
        let rows: Vec<Row> = others.iter().map(|&i| conic_row(f, &self.base.points[i])).collect();
        let conic = HomPoly::from_coeffs(3, 2, linalg::nullspace(f, &rows, 6).remove(0));
        let ends: Vec<ProjPoint> = others[..2]
            .iter()
            .map(|&i| {
                let p = self.base.points[i];
                let grad: Row = (0..3).map(|k| conic.partial(f, k).eval(f, p.coords())).collect();
                linalg::nullspace(f, &[grad], 3)
                    .into_iter()
                    .find(|v| linalg::rank(f, &[v.clone(), p.coords().to_vec()]) == 2)
                    .map(|v| self.exceptional_point(i, &v).unwrap())
                    .unwrap()
            })
            .collect();
        Line::through(f, &ends[0], &ends[1]).unwrap()
    }

    /// The 27 lines: `E_i`, the strict transforms of the 15 lines through
    /// two base points, and of the 6 conics through five.
    pub fn classical_lines(&self) -> Vec<Line> {
        let mut out: Vec<Line> = self.exceptional.to_vec();
        for p in combinations(6, 2) {
            out.push(self.base_line(p[0], p[1]));
        }
        out.extend((0..6).map(|j| self.conic_line(j)));
        out
    }

    pub fn twisted_cubic(&self, l: &Line) -> Result<TwistedCubic> {
        let f = self.field();
        if l.dim() != 2 {
            return Err(Error::DimensionMismatch("expected a line of P^2".into()));
        }
        let mut points: Vec<ProjPoint> = l.points(f).iter().filter_map(|u| self.forward(u)).collect();
        points.sort();
        let base_points_on_line = (0..6).filter(|&i| l.contains(f, &self.base.points[i])).collect();
        Ok(TwistedCubic {
            line: *l,
            points,
            base_points_on_line,
        })
    }

    fn require_complement(&self, x: &ProjPoint) -> Result<()> {
        if self.complement_index(x).is_none() {
            return Err(Error::Hypothesis(format!(
                "{x:?} is not a rational point off the exceptional lines"
            )));
        }
        Ok(())
    }

    /// All values `x ∘_(C,p) x` over the rational planes through `x`, with
    /// the first plane producing each.
    pub fn self_compositions(&self, x: &ProjPoint) -> Result<BTreeMap<ProjPoint, Plane>> {
        self.require_complement(x)?;
        let f = self.field();
        let mut out = BTreeMap::new();
        for t in enumerate_planes(f).into_iter().filter(|t| t.contains(f, x)) {
            if let Ok(r) = self.compose_cp(&t, x, x) {
                out.entry(r.point).or_insert(t);
            }
        }
        Ok(out)
    }

    /// Plane through `x`, `y` and the tangent of `p^{-1}(line p(x) p(y))`
    /// at `x`.
    pub fn tangent_witness_plane(&self, x: &ProjPoint, y: &ProjPoint) -> Result<Plane> {
        self.require_complement(x)?;
        self.require_complement(y)?;
        let f = self.field();
        let (u, v) = (self.inverse[x], self.inverse[y]);
        let tv: Vec<FieldElem> = self
            .system
            .iter()
            .map(|g| g.polar(u.coords(), v.coords()))
            .collect();
        let tp = ProjPoint::new(f, &tv)
            .map_err(|_| Error::Degenerate("zero tangent vector".into()))?;
        Plane::through(f, &[*x, *y, tp])
    }

    /// Pairwise compositions over all planes through each pair of distinct
    /// points of the complement; entries are complement indices.
    fn pair_table(&self) -> &Vec<Vec<usize>> {
        self.pair_table.get_or_init(|| {
            let f = self.field();
            let n = self.complement.len();
            let planes = enumerate_planes(f);
            let curves: HashMap<Plane, PlaneCubic> = planes
                .iter()
                .filter_map(|t| self.image_curve(t).ok().map(|c| (*t, c)))
                .collect();
            let mut table = vec![Vec::new(); n * n];
            for i in 0..n {
                for j in i + 1..n {
                    let (a, b) = (&self.complement[i], &self.complement[j]);
                    let mut vals = BTreeSet::new();
                    for t in planes.iter().filter(|t| t.contains(f, a) && t.contains(f, b)) {
                        let Some(d) = curves.get(t) else { continue };
                        if let Ok(r) = self.compose_on(d, t, a, b) {
                            if let Some(k) = self.complement_index(&r.point) {
                                vals.insert(k);
                            }
                        }
                    }
                    let vals: Vec<usize> = vals.into_iter().collect();
                    table[i * n + j] = vals.clone();
                    table[j * n + i] = vals;
                }
            }
            table
        })
    }

    /// Closure of `seed` (complement indices) under `a ∘_(C,p) b` for
    /// distinct constructed `a, b` and every rational plane through them.
    pub fn theorem_52_closure(&self, seed: &BTreeSet<usize>) -> Result<ClosureResult> {
        let n = self.complement.len();
        if let Some(&bad) = seed.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange(bad));
        }
        let table = self.pair_table();
        Ok(run_closure(n, seed, usize::MAX, usize::MAX, |reached| {
            let items: Vec<usize> = reached.iter().copied().collect();
            let mut out = BTreeSet::new();
            for (k, &a) in items.iter().enumerate() {
                for &b in &items[k + 1..] {
                    out.extend(table[a * n + b].iter().copied());
                }
            }
            out
        }))
    }

    /// First seed (by size, then lexicographically) generating the whole
    /// complement under [`theorem_52_closure`](Self::theorem_52_closure).
    pub fn search_generating_seed(&self, max_size: usize) -> Result<Option<(Vec<usize>, ClosureResult)>> {
        for k in 1..=max_size {
            for seed in combinations(self.complement.len(), k) {
                let s: BTreeSet<usize> = seed.iter().copied().collect();
                let r = self.theorem_52_closure(&s)?;
                if r.generated_all {
                    return Ok(Some((seed, r)));
                }
            }
        }
        Ok(None)
    }

    /// Why the tangent-line witness plane for `(x, y)` cannot produce `y`,
    /// if it cannot.
    pub fn obstruction(&self, x: &ProjPoint, y: &ProjPoint) -> Result<Option<Obstruction>> {
        self.require_complement(x)?;
        self.require_complement(y)?;
        let f = self.field();
        if self.surface.tangent_plane(x)?.contains(f, y) {
            return Ok(Some(Obstruction::TangentPlane));
        }
        let l = Line::through(f, &self.inverse[x], &self.inverse[y])?;
        if let Some(i) = self.base.points.iter().position(|b| l.contains(f, b)) {
            return Ok(Some(Obstruction::ReducibleTwistedCubic(i)));
        }
        let t = self.tangent_witness_plane(x, y)?;
        if let Some(i) = self.exceptional.iter().position(|e| t.contains_line(f, e)) {
            return Ok(Some(Obstruction::ExceptionalSection(i)));
        }
        Ok(None)
    }

    pub fn theorem_53_check(&self, x: &ProjPoint) -> Result<SelfCompositionReport> {
        let values = self.self_compositions(x)?;
        let missing: Vec<ProjPoint> = self
            .complement
            .iter()
            .filter(|y| *y != x && !values.contains_key(y))
            .copied()
            .collect();
        let f = self.field();
        let mut obstructed = 0;
        let mut missing_json = Vec::new();
        for y in &missing {
            let why = self.obstruction(x, y)?;
            obstructed += why.is_some() as usize;
            missing_json.push((y.to_json(f), why));
        }
        Ok(SelfCompositionReport {
            point: x.to_json(f),
            covered: self.complement.iter().filter(|y| values.contains_key(y)).count(),
            covers_itself: values.contains_key(x),
            passed: missing.is_empty(),
            unexplained: missing.len() - obstructed,
            missing: missing_json,
            witnesses: values
                .iter()
                .filter(|(y, _)| self.complement_index(y).is_some())
                .map(|(y, t)| (y.to_json(f), t.coeffs().iter().map(|&c| f.coeffs(c)).collect()))
                .collect(),
        })
    }

    /// Closure of `{x}` under `a ∘_(C,p) b` for all constructed `a, b`,
    /// equal ones included, over every rational plane through them.
    pub fn single_point_closure(&self, x: &ProjPoint) -> Result<ClosureResult> {
        self.require_complement(x)?;
        let n = self.complement.len();
        let table = self.pair_table();
        let mut diag: Vec<Option<Vec<usize>>> = vec![None; n];
        let seed = BTreeSet::from([self.complement_index(x).unwrap()]);
        let mut err = None;
        let r = run_closure(n, &seed, usize::MAX, usize::MAX, |reached| {
            let mut out = BTreeSet::new();
            for &a in reached {
                if diag[a].is_none() {
                    match self.self_compositions(&self.complement[a]) {
                        Ok(v) => {
                            diag[a] = Some(v.keys().filter_map(|y| self.complement_index(y)).collect())
                        }
                        Err(e) => err = Some(e),
                    }
                }
                out.extend(diag[a].iter().flatten().copied());
                for &b in reached.range(a + 1..) {
                    out.extend(table[a * n + b].iter().copied());
                }
            }
            out
        });
        err.map_or(Ok(r), Err)
    }

    /// `u3` of the collinearity cubic of all rational points.
    pub fn u3_partition(&self) -> Result<Partition> {
        Ok(u3(&collinearity(&self.surface)?))
    }

    pub fn corollary_54_check(&self) -> Result<bool> {
        Ok(self.u3_partition()?.class_count() == 1)
    }

    pub fn claim_576_check(&self, t: &Plane, pts: [&ProjPoint; 4]) -> Result<bool> {
        self.elimination_sides(t, pts).map(|(a, b)| a == b)
    }

    /// The triple `(E_i, E_j, strict transform of the line p_i p_j)`.
    pub fn exceptional_triple(&self, i: usize, j: usize) -> Result<LineTriple> {
        LineTriple::new(
            &self.surface,
            self.exceptional[i],
            self.exceptional[j],
            self.base_line(i, j),
        )
    }

    /// For `l1`, `l2` exceptional and `p(m)` a line: `m ∩ T` equals
    /// `(l1 ∩ T) ∘_(C,p) (l2 ∩ T)`.
    pub fn claim_577_check(&self, lambda: &LineTriple, t: &Plane) -> Result<bool> {
        let f = self.field();
        if !self.exceptional.contains(&lambda.l1) || !self.exceptional.contains(&lambda.l2) {
            return Err(Error::Hypothesis("l1 and l2 must be exceptional".into()));
        }
        let images: Vec<Row> = lambda
            .m
            .points(f)
            .iter()
            .filter_map(|x| self.project(x))
            .map(|u| u.coords().to_vec())
            .collect();
        if linalg::rank(f, &images) != 2 {
            return Err(Error::Hypothesis("p(m) is not a line".into()));
        }
        let meet = |l: &Line| {
            t.meet_line(f, l)
                .ok_or_else(|| Error::Degenerate("the plane contains a line of the triple".into()))
        };
        let (x, y, z) = (meet(&lambda.l1)?, meet(&lambda.l2)?, meet(&lambda.m)?);
        Ok(self.compose_cp(t, &x, &y)?.point == z)
    }

    /// Both sides of `u ∘_(C,p) w = (x ∘ y) ∘ [(x ∘_(C,p) y) ∘ (u ∘ w)]`.
    pub fn elimination_sides(
        &self,
        t: &Plane,
        [x, y, u, w]: [&ProjPoint; 4],
    ) -> Result<(ProjPoint, ProjPoint)> {
        let c = self.surface.plane_section(t)?;
        let lhs = self.compose_cp(t, u, w)?.point;
        let xy_cp = self.compose_cp(t, x, y)?.point;
        let xy = section_compose(&c, x, y)?;
        let uw = section_compose(&c, u, w)?;
        let inner = section_compose(&c, &xy_cp, &uw)?;
        Ok((lhs, section_compose(&c, &xy, &inner)?))
    }

    /// Both sides of `u * w = (x * y)(x ∘ y)^{-1}(u ∘ w)` where `*` is the
    /// modified composition and products use the group law of the smooth
    /// section with neutral element `a`.
    pub fn group_law_sides(
        &self,
        t: &Plane,
        a: &ProjPoint,
        [x, y, u, w]: [&ProjPoint; 4],
    ) -> Result<(ProjPoint, ProjPoint)> {
        let c = self.surface.plane_section(t)?;
        let table = CompositionTable::new(&c)?;
        let idx = |p: &ProjPoint| -> Result<usize> {
            table
                .index_of(&c.push(p)?)
                .ok_or_else(|| Error::InvalidPoint(format!("{p:?} is not on the section")))
        };
        let e = idx(a)?;
        let add = |i, j| table.add(e, i, j);
        let neg = |i| table.third(i, table.third(e, e));
        let star_uw = idx(&self.compose_cp(t, u, w)?.point)?;
        let star_xy = idx(&self.compose_cp(t, x, y)?.point)?;
        let xy = table.third(idx(x)?, idx(y)?);
        let uw = table.third(idx(u)?, idx(w)?);
        let rhs = add(add(star_xy, neg(xy)), uw);
        let pt = |i: usize| c.pull(&table.points()[i]);
        Ok((pt(star_uw), pt(rhs)))
    }

    /// Planes whose image curve is defined (no exceptional line in the
    /// section), in canonical order.
    pub fn admissible_planes(&self) -> Vec<Plane> {
        let f = self.field();
        enumerate_planes(f)
            .into_iter()
            .filter(|t| !self.exceptional.iter().any(|e| t.contains_line(f, e)))
            .collect()
    }

    /// Rational points of the section by `t`, sorted.
    pub fn section_points(&self, t: &Plane) -> Vec<ProjPoint> {
        let f = self.field();
        t.points(f).into_iter().filter(|x| self.surface.contains(x)).collect()
    }

    pub fn summary(&self) -> serde_json::Value {
        let f = self.field();
        serde_json::json!({
            "base": self.base.to_json(),
            "surface": self.surface.to_json(),
            "points": self.surface.points().len(),
            "complement": self.complement.len(),
            "exceptional": self.exceptional.iter().map(|e| e.points(f).len()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfCompositionReport {
    pub point: Vec<Vec<u32>>,
    /// Points of the complement, `x` included, reached as `x ∘_(C,p) x`.
    pub covered: usize,
    pub covers_itself: bool,
    pub passed: bool,
    /// Points of the complement other than `x` not reached, with the
    /// obstruction found for each.
    pub missing: Vec<(Vec<Vec<u32>>, Option<Obstruction>)>,
    /// Missing points with no obstruction found.
    pub unexplained: usize,
    /// For each reached point of the complement, the first plane producing it.
    pub witnesses: Vec<(Vec<Vec<u32>>, Vec<Vec<u32>>)>,
}

/// A reason the plane realizing `y = x ∘_(C,p) x` does not exist.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    /// `y` lies in the tangent plane at `x`, whose section is singular at `x`.
    TangentPlane,
    /// The line `p(x) p(y)` passes through this base point, so the curve
    /// through `x` and `y` is not a twisted cubic.
    ReducibleTwistedCubic(usize),
    /// The only candidate plane contains this exceptional line.
    ExceptionalSection(usize),
}

/// Tally of a sampled identity check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub checked: usize,
    pub held: usize,
    /// Samples with an undefined subexpression (not counted as failures).
    pub undefined: usize,
    pub failures: Vec<String>,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(true) => {
                self.checked += 1;
                self.held += 1;
            }
            Ok(false) => {
                self.checked += 1;
                self.failures.push(what());
            }
            Err(_) => self.undefined += 1,
        }
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, v: &'a [T]) -> &'a T {
    v.choose(rng).unwrap()
}

impl SplitSurface {
    /// Checks the identity relating `∘_(C,p)` to `∘` on `samples` random
    /// quadruples of section points that give defined compositions.
    pub fn sample_elimination(&self, samples: usize, seed: u64) -> SampleReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let planes = self.admissible_planes();
        let mut rep = SampleReport::default();
        let mut attempts = 0;
        while rep.checked < samples && attempts < samples * 100 {
            attempts += 1;
            let t = *pick(&mut rng, &planes);
            let pts = self.section_points(&t);
            if pts.is_empty() {
                continue;
            }
            let q = [0; 4].map(|_| *pick(&mut rng, &pts));
            let r = self
                .elimination_sides(&t, [&q[0], &q[1], &q[2], &q[3]])
                .map(|(a, b)| a == b);
            rep.record(r, || format!("plane {t:?}, points {q:?}"));
        }
        rep
    }

    /// Checks the modified composition against the group law on smooth
    /// sections.
    pub fn sample_group_law(&self, samples: usize, seed: u64) -> SampleReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let planes = self.admissible_planes();
        let mut rep = SampleReport::default();
        let mut attempts = 0;
        while rep.checked < samples && attempts < samples * 100 {
            attempts += 1;
            let t = *pick(&mut rng, &planes);
            let c = match self.surface.plane_section(&t) {
                Ok(c) if c.is_smooth() => c,
                _ => continue,
            };
            let pts: Vec<ProjPoint> = c.points().iter().map(|u| c.pull(u)).collect();
            if pts.is_empty() {
                continue;
            }
            let a = *pick(&mut rng, &pts);
            let q = [0; 4].map(|_| *pick(&mut rng, &pts));
            let r = self
                .group_law_sides(&t, &a, [&q[0], &q[1], &q[2], &q[3]])
                .map(|(l, r)| l == r);
            rep.record(r, || format!("plane {t:?}, identity {a:?}, points {q:?}"));
        }
        rep
    }

    /// Checks `m ∩ T = (E_i ∩ T) ∘_(C,p) (E_j ∩ T)` for random `i != j` and
    /// planes `T`.
    pub fn sample_exceptional_triple(&self, samples: usize, seed: u64) -> SampleReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let planes = self.admissible_planes();
        let mut rep = SampleReport::default();
        let mut attempts = 0;
        while rep.checked < samples && attempts < samples * 100 {
            attempts += 1;
            let i = rng.gen_range(0..6);
            let j = (i + rng.gen_range(1..6)) % 6;
            let t = *pick(&mut rng, &planes);
            let r = self
                .exceptional_triple(i, j)
                .and_then(|lambda| self.claim_577_check(&lambda, &t));
            rep.record(r, || format!("lines {i},{j}, plane {t:?}"));
        }
        rep
    }
}

/// Compares `t^{-1}(t(x) ∘ t(y))` with `x ∘ y` modulo `U_3` on a smooth
/// plane cubic, for `t` a product of reflections `t_z(w) = z ∘ w`.
pub struct ReflectionCheck {
    curve: PlaneCubic,
    points: Vec<ProjPoint>,
    u3: Partition,
}

impl ReflectionCheck {
    pub fn new(curve: PlaneCubic) -> Result<Self> {
        if !curve.is_smooth() {
            return Err(Error::Hypothesis("the curve is singular".into()));
        }
        let cubic = collinearity(curve.form())?;
        let points = cubic.labels().unwrap().to_vec();
        Ok(ReflectionCheck {
            u3: u3(&cubic),
            curve,
            points,
        })
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn u3(&self) -> &Partition {
        &self.u3
    }

    fn compose(&self, a: &ProjPoint, b: &ProjPoint) -> Result<ProjPoint> {
        self.curve
            .curve_third(a, b)?
            .point()
            .ok_or_else(|| Error::Undefined("composition along a line".into()))
    }

    /// `t = t_{z_1} ... t_{z_n}` for `reflections = [z_1, ..., z_n]`.
    pub fn check(&self, reflections: &[ProjPoint], x: &ProjPoint, y: &ProjPoint) -> Result<bool> {
        let t = |w: ProjPoint| -> Result<ProjPoint> {
            reflections.iter().rev().try_fold(w, |w, z| self.compose(z, &w))
        };
        let t_inv = |w: ProjPoint| -> Result<ProjPoint> {
            reflections.iter().try_fold(w, |w, z| self.compose(z, &w))
        };
        let lhs = t_inv(self.compose(&t(*x)?, &t(*y)?)?)?;
        let rhs = self.compose(x, y)?;
        let idx = |p: &ProjPoint| self.points.binary_search(p).map_err(|_| Error::NotOnForm);
        Ok(self.u3.same(idx(&lhs)?, idx(&rhs)?))
    }
}

pub fn lemma_56_check(
    curve: &PlaneCubic,
    reflections: &[ProjPoint],
    x: &ProjPoint,
    y: &ProjPoint,
) -> Result<bool> {
    ReflectionCheck::new(curve.clone())?.check(reflections, x, y)
}

/// The unique cubic `G` in four variables with `G(F_0, ..., F_3) = 0`.
fn implicit_equation(f: &FieldSpec, system: &[CubicForm]) -> Result<CubicForm> {
    let cols: Vec<HomPoly> = monomials(4, 3)
        .iter()
        .map(|e| {
            let mut p = HomPoly::from_coeffs(3, 0, vec![f.one()]);
            for (g, &k) in system.iter().zip(e.iter()) {
                for _ in 0..k {
                    p = p.mul(f, g.poly());
                }
            }
            p
        })
        .collect();
    let nrows = cols[0].coeffs.len();
    let rows: Vec<Row> = (0..nrows)
        .map(|r| cols.iter().map(|c| c.coeffs[r]).collect())
        .collect();
    let kernel = linalg::nullspace(f, &rows, cols.len());
    if kernel.len() != 1 {
        return Err(Error::Degenerate(format!(
            "cubic relations among the system have dimension {}",
            kernel.len()
        )));
    }
    CubicForm::new(f, 3, kernel.into_iter().next().unwrap())
}

/// The exceptional line over a base point: the image of the differential
/// of the forward map there.
fn exceptional_line(f: &FieldSpec, system: &[CubicForm], p: &ProjPoint) -> Line {
    let grads: Vec<Vec<FieldElem>> = system.iter().map(|g| g.gradient(p.coords())).collect();
    let mut images: Vec<Row> = (0..3)
        .map(|k| grads.iter().map(|g| g[k]).collect())
        .collect();
    let piv = linalg::rref(f, &mut images);
    debug_assert_eq!(piv.len(), 2);
    let a = ProjPoint::new(f, &images[0]).unwrap();
    let b = ProjPoint::new(f, &images[1]).unwrap();
    Line::through(f, &a, &b).unwrap()
}
