use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{combine, enumerate_lines, enumerate_proj_points, Line, Plane, PlaneCubic, ProjPoint};
use crate::error::{Error, Result};
use crate::field::{Embedding, FieldElem, FieldSpec};
use crate::linalg::{self, Row};
use crate::poly::{monomial_index, monomials, HomPoly};

/// Outcome of intersecting a cubic with the line through two of its points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThirdResult {
    /// The residual intersection point.
    Unique(ProjPoint),
    /// The whole line lies in the cubic.
    LineInV,
    /// The residual point is not rational.
    NoRationalThird,
}

impl ThirdResult {
    pub fn point(&self) -> Option<ProjPoint> {
        match self {
            ThirdResult::Unique(z) => Some(*z),
            _ => None,
        }
    }
}

/// A nonzero homogeneous cubic in `P^2` (10 coefficients) or `P^3` (20).
#[derive(Clone, Debug)]
pub struct CubicForm {
    field: FieldSpec,
    poly: HomPoly,
    grad: Vec<HomPoly>,
}

impl PartialEq for CubicForm {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.poly == other.poly
    }
}

impl Eq for CubicForm {}

/// On-disk representation of a form.
#[derive(Serialize, Deserialize)]
struct FormRepr {
    field: FieldSpec,
    dim: usize,
    coeffs: Vec<Vec<u32>>,
}

impl CubicForm {
    pub fn new(field: &FieldSpec, dim: usize, coeffs: Vec<FieldElem>) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::DimensionMismatch(format!("P^{dim} is not supported")));
        }
        let expected = monomials(dim + 1, 3).len();
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients, expected {expected}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| !field.contains(c)) {
            return Err(Error::FieldMismatch("coefficient outside the field".into()));
        }
        Self::from_poly(field, HomPoly::from_coeffs(dim + 1, 3, coeffs))
    }

    pub fn from_poly(field: &FieldSpec, poly: HomPoly) -> Result<Self> {
        if poly.degree != 3 || !(3..=4).contains(&poly.nvars) {
            return Err(Error::DimensionMismatch("not a ternary or quaternary cubic".into()));
        }
        if poly.is_zero() {
            return Err(Error::ZeroForm);
        }
        let grad = (0..poly.nvars).map(|i| poly.partial(field, i)).collect();
        Ok(CubicForm {
            field: field.clone(),
            poly,
            grad,
        })
    }

    pub fn from_ints(field: &FieldSpec, dim: usize, coeffs: &[i64]) -> Result<Self> {
        Self::new(field, dim, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    /// Builds a form from `(exponents, coefficient)` terms.
    pub fn from_terms(field: &FieldSpec, dim: usize, terms: &[([u8; 4], FieldElem)]) -> Result<Self> {
        let mut p = HomPoly::zero(dim + 1, 3);
        for (e, c) in terms {
            let i = monomial_index(dim + 1, 3, e);
            p.coeffs[i] = field.add(p.coeffs[i], *c);
        }
        Self::from_poly(field, p)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.poly.nvars - 1
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.poly.coeffs
    }

    pub fn poly(&self) -> &HomPoly {
        &self.poly
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FormRepr {
            field: self.field.clone(),
            dim: self.dim(),
            coeffs: self.coeffs().iter().map(|&c| self.field.coeffs(c)).collect(),
        })
        .expect("form serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let r: FormRepr = serde_json::from_value(v.clone())?;
        let coeffs: Result<Vec<FieldElem>> =
            r.coeffs.iter().map(|c| r.field.elem_from_coeffs(c)).collect();
        Self::new(&r.field, r.dim, coeffs?)
    }

    /// The same form over a field containing this one.
    pub fn base_change(&self, emb: &Embedding) -> Result<CubicForm> {
        if emb.source() != &self.field {
            return Err(Error::FieldMismatch("embedding source differs".into()));
        }
        Self::from_poly(emb.target(), self.poly.map_coeffs(|c| emb.apply(c)))
    }

    fn check_point(&self, x: &ProjPoint) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point of P^{} on a form in P^{}",
                x.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, x: &ProjPoint) -> FieldElem {
        self.poly.eval(&self.field, x.coords())
    }

    pub fn eval_vec(&self, x: &[FieldElem]) -> FieldElem {
        self.poly.eval(&self.field, x)
    }

    pub fn gradient(&self, x: &[FieldElem]) -> Vec<FieldElem> {
        self.grad.iter().map(|g| g.eval(&self.field, x)).collect()
    }

    /// Directional derivative `sum_i y_i dF/dX_i (x)`: the `s^2 t`
    /// coefficient of `F(s x + t y)`.
    pub fn polar(&self, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
        let f = &self.field;
        self.grad
            .iter()
            .zip(y)
            .filter(|(_, yi)| !yi.is_zero())
            .fold(f.zero(), |acc, (g, &yi)| f.add(acc, f.mul(yi, g.eval(f, x))))
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        self.eval(x).is_zero()
    }

    pub fn is_smooth_point(&self, x: &ProjPoint) -> bool {
        self.contains(x) && self.gradient(x.coords()).iter().any(|g| !g.is_zero())
    }

    fn require_smooth(&self, x: &ProjPoint) -> Result<()> {
        self.check_point(x)?;
        if !self.contains(x) {
            return Err(Error::NotOnForm);
        }
        if self.gradient(x.coords()).iter().all(|g| g.is_zero()) {
            return Err(Error::SingularPoint);
        }
        Ok(())
    }

    /// Rational points of the zero set, in canonical order.
    pub fn points(&self) -> Vec<ProjPoint> {
        enumerate_proj_points(self.dim(), &self.field)
            .iter()
            .filter(|x| self.contains(x))
            .copied()
            .collect()
    }

    /// Points over an extension field, for a form over its subfield.
    pub fn points_over(&self, emb: &Embedding) -> Result<Vec<ProjPoint>> {
        Ok(self.base_change(emb)?.points())
    }

    /// Whether the form has no singular point over the algebraic closure.
    ///
    /// Decided by a Macaulay matrix: the ideal generated by the partial
    /// derivatives (and the form itself in characteristic 3, where Euler's
    /// identity does not recover it) has no projective zero exactly when it
    /// contains every monomial of degree `D`, with `D` past the Lazard bound.
    pub fn is_smooth(&self) -> bool {
        let f = &self.field;
        let n = self.dim();
        let nv = n + 1;
        // Cheap rejection on rational points first.
        if self.points().iter().any(|x| !self.is_smooth_point(x)) {
            return false;
        }
        let mut gens: Vec<&HomPoly> = self.grad.iter().filter(|g| !g.is_zero()).collect();
        let char3 = f.p() == 3;
        if char3 {
            gens.push(&self.poly);
        }
        let degree = if char3 { n + 3 } else { n + 2 };
        let cols = monomials(nv, degree).len();
        let mut rows: Vec<Row> = Vec::new();
        for g in gens {
            for m in monomials(nv, degree - g.degree) {
                let mut row = vec![f.zero(); cols];
                for (e, c) in g.terms() {
                    let mut s = [0u8; 4];
                    for i in 0..nv {
                        s[i] = e[i] + m[i];
                    }
                    let idx = monomial_index(nv, degree, &s);
                    row[idx] = f.add(row[idx], c);
                }
                rows.push(row);
            }
        }
        rows.len() >= cols && linalg::rank(f, &rows) == cols
    }

    /// Third intersection of the line `xy` with the cubic.
    ///
    /// `F(s x + t y) = s t (b s + c t)` with `b = polar(x, y)` and
    /// `c = polar(y, x)`, so the residual root is `c x - b y`.
    pub fn third_point(&self, x: &ProjPoint, y: &ProjPoint) -> Result<ThirdResult> {
        self.require_smooth(x)?;
        self.require_smooth(y)?;
        if x == y {
            return Err(Error::SamePoint);
        }
        Ok(self.third_unchecked(x, y))
    }

    pub(crate) fn third_unchecked(&self, x: &ProjPoint, y: &ProjPoint) -> ThirdResult {
        let f = &self.field;
        let b = self.polar(x.coords(), y.coords());
        let c = self.polar(y.coords(), x.coords());
        if b.is_zero() && c.is_zero() {
            return ThirdResult::LineInV;
        }
        ThirdResult::Unique(ProjPoint::new(f, &combine(f, c, x, f.neg(b), y)).unwrap())
    }

    /// Tangent hyperplane at a smooth point (a plane in `P^3`, a line in `P^2`).
    pub fn tangent_plane(&self, x: &ProjPoint) -> Result<Plane> {
        self.require_smooth(x)?;
        Plane::new(&self.field, &self.gradient(x.coords()))
    }

    /// All rational `z` with `(x, x, z)` collinear: third points of tangent
    /// lines at `x` (including `x` itself on lines of triple contact) and all
    /// rational points of lines of the cubic through `x`.
    pub fn tangent_compose(&self, x: &ProjPoint) -> Result<BTreeSet<ProjPoint>> {
        let t = self.tangent_plane(x)?;
        Ok(self.tangent_compose_in(x, &t.points(&self.field)))
    }

    pub(crate) fn tangent_compose_in(
        &self,
        x: &ProjPoint,
        tangent_points: &[ProjPoint],
    ) -> BTreeSet<ProjPoint> {
        let f = &self.field;
        let mut out = BTreeSet::new();
        for v in tangent_points.iter().filter(|v| *v != x) {
            // F(s x + t v) = t^2 (c s + d t) since F(x) = polar(x, v) = 0.
            let c = self.polar(v.coords(), x.coords());
            let d = self.eval(v);
            if c.is_zero() && d.is_zero() {
                let line = Line::through(f, x, v).unwrap();
                out.extend(line.points(f));
            } else {
                out.insert(ProjPoint::new(f, &combine(f, d, x, f.neg(c), v)).unwrap());
            }
        }
        out
    }

    pub fn contains_line(&self, l: &Line) -> bool {
        let (a, b) = l.basis();
        let (a, b) = (a.coords(), b.coords());
        self.eval_vec(a).is_zero()
            && self.eval_vec(b).is_zero()
            && self.polar(a, b).is_zero()
            && self.polar(b, a).is_zero()
    }

    /// Every rational line contained in the zero set.
    pub fn lines(&self) -> Vec<Line> {
        enumerate_lines(self.dim(), &self.field)
            .into_iter()
            .filter(|l| self.contains_line(l))
            .collect()
    }

    /// Whether the tangent section at `x` has a triple point at `x`.
    ///
    /// The quadratic term of `F(x + t v)` is `polar(v, x)`; the point is
    /// Eckardt (a flex, for plane curves) when that quadratic form vanishes
    /// identically on the tangent hyperplane.
    pub fn is_eckardt(&self, x: &ProjPoint) -> Result<bool> {
        let t = self.tangent_plane(x)?;
        let f = &self.field;
        let basis = t.basis(f);
        let q = |v: &[FieldElem]| self.polar(v, x.coords());
        let k = basis.len();
        for i in 0..k {
            if !q(&basis[i]).is_zero() {
                return Ok(false);
            }
            for j in i + 1..k {
                let s: Vec<FieldElem> = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(&a, &b)| f.add(a, b))
                    .collect();
                let cross = f.sub(f.sub(q(&s), q(&basis[i])), q(&basis[j]));
                if !cross.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The plane cubic cut out by `plane`, with a chart onto `P^2`.
    pub fn plane_section(&self, plane: &Plane) -> Result<PlaneCubic> {
        if self.dim() != 3 {
            return Err(Error::DimensionMismatch("plane sections need a surface".into()));
        }
        PlaneCubic::section(self, plane)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn pt(f: &FieldSpec, c: &[i64]) -> ProjPoint {
        ProjPoint::from_ints(f, c).unwrap()
    }

    #[test]
    fn fermat_curve_over_f2() {
        let c = corpus::fermat_curve(&FieldSpec::new(2, 1).unwrap());
        let f = c.field().clone();
        assert_eq!(
            c.points(),
            vec![pt(&f, &[1, 0, 1]), pt(&f, &[1, 1, 0]), pt(&f, &[0, 1, 1])]
        );
        assert_eq!(
            c.third_point(&pt(&f, &[1, 1, 0]), &pt(&f, &[1, 0, 1])).unwrap(),
            ThirdResult::Unique(pt(&f, &[0, 1, 1]))
        );
        let tc = c.tangent_compose(&pt(&f, &[1, 1, 0])).unwrap();
        assert_eq!(tc.into_iter().collect::<Vec<_>>(), vec![pt(&f, &[1, 1, 0])]);
        assert!(c.is_smooth());
    }

    #[test]
    fn fermat_surface_over_f2() {
        let f = FieldSpec::new(2, 1).unwrap();
        let s = corpus::fermat_surface(&f);
        let pts = s.points();
        assert_eq!(pts.len(), 7);
        for p in &pts {
            let sum = p.coords().iter().fold(f.zero(), |a, &b| f.add(a, b));
            assert!(sum.is_zero());
        }
        assert!(s.is_smooth());
        assert_eq!(
            s.third_point(&pt(&f, &[1, 1, 0, 0]), &pt(&f, &[0, 0, 1, 1])).unwrap(),
            ThirdResult::LineInV
        );
        assert_eq!(
            s.tangent_plane(&pt(&f, &[1, 1, 0, 0])).unwrap(),
            Plane::from_ints(&f, &[1, 1, 0, 0]).unwrap()
        );
        assert_eq!(
            s.tangent_plane(&pt(&f, &[1, 1, 1, 1])).unwrap(),
            Plane::from_ints(&f, &[1, 1, 1, 1]).unwrap()
        );
        let l = Line::through(&f, &pt(&f, &[1, 1, 0, 0]), &pt(&f, &[0, 0, 1, 1])).unwrap();
        assert!(s.lines().contains(&l));
    }

    #[test]
    fn diagonal_f4_surface_has_nine_eckardt_points_and_no_lines() {
        let f = FieldSpec::new(2, 2).unwrap();
        let s = corpus::diagonal_a_surface(&f);
        let pts = s.points();
        assert_eq!(pts.len(), 9);
        let a = f.generator();
        let units = [f.one(), a, f.mul(a, a)];
        let mut expected = Vec::new();
        for &u in &units {
            let z = f.zero();
            let o = f.one();
            expected.push(ProjPoint::new(&f, &[o, u, z, z]).unwrap());
            expected.push(ProjPoint::new(&f, &[o, z, u, z]).unwrap());
            expected.push(ProjPoint::new(&f, &[z, o, u, z]).unwrap());
        }
        expected.sort();
        assert_eq!(pts, expected);
        assert!(s.is_smooth());
        assert!(s.lines().is_empty());
        for p in &pts {
            assert!(s.is_eckardt(p).unwrap());
            assert!(s.tangent_compose(p).unwrap().contains(p));
        }
    }

    #[test]
    fn singular_forms_are_detected() {
        let f = FieldSpec::new(2, 1).unwrap();
        let xyz = CubicForm::from_terms(&f, 3, &[([1, 1, 1, 0], f.one())]).unwrap();
        assert!(!xyz.is_smooth());
        // Cone over the Fermat curve: singular at the vertex (0:0:0:1).
        let cone = CubicForm::from_terms(
            &f,
            3,
            &[([3, 0, 0, 0], f.one()), ([0, 3, 0, 0], f.one()), ([0, 0, 3, 0], f.one())],
        )
        .unwrap();
        assert!(!cone.is_smooth());
        let f3 = FieldSpec::new(3, 1).unwrap();
        // X^3+Y^3+Z^3+W^3 = (X+Y+Z+W)^3 in characteristic 3.
        assert!(!corpus::fermat_surface(&f3).is_smooth());
        assert!(corpus::diagonal_a_surface(&FieldSpec::new(2, 2).unwrap()).is_smooth());
    }

    #[test]
    fn errors_on_bad_inputs() {
        let f = FieldSpec::new(2, 1).unwrap();
        let c = corpus::fermat_curve(&f);
        let x = pt(&f, &[1, 1, 0]);
        assert_eq!(c.third_point(&x, &x), Err(Error::SamePoint));
        assert_eq!(
            c.third_point(&x, &pt(&f, &[1, 0, 0])),
            Err(Error::NotOnForm)
        );
        assert_eq!(
            CubicForm::from_ints(&f, 2, &[0; 10]).unwrap_err(),
            Error::ZeroForm
        );
        let xyz = CubicForm::from_terms(&f, 3, &[([1, 1, 1, 0], f.one())]).unwrap();
        let sing = pt(&f, &[0, 0, 0, 1]);
        assert_eq!(xyz.tangent_plane(&sing), Err(Error::SingularPoint));
    }

    #[test]
    fn json_roundtrip() {
        let s = corpus::diagonal_a_surface(&FieldSpec::new(2, 2).unwrap());
        let v = s.to_json();
        assert_eq!(CubicForm::from_json(&v).unwrap(), s);
    }
}
