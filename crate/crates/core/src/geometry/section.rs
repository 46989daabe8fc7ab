use std::collections::HashMap;
use std::sync::OnceLock;

use super::{combine, CubicForm, Plane, ProjPoint, ThirdResult};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Row;
use crate::poly::HomPoly;

/// Identification of a plane of `P^3` with `P^2`: the plane's canonical
/// kernel basis, which has unit entries in three "free" coordinates.
#[derive(Clone, Debug)]
struct Chart {
    plane: Plane,
    basis: Vec<Row>,
    free: [usize; 3],
}

/// A plane cubic curve, optionally carrying a chart from a plane of `P^3`.
#[derive(Clone, Debug)]
pub struct PlaneCubic {
    form: CubicForm,
    chart: Option<Chart>,
    smooth: OnceLock<bool>,
}

impl PlaneCubic {
    pub fn new(form: CubicForm) -> Result<Self> {
        if form.dim() != 2 {
            return Err(Error::DimensionMismatch("expected a plane cubic".into()));
        }
        Ok(PlaneCubic {
            form,
            chart: None,
            smooth: OnceLock::new(),
        })
    }

    pub(crate) fn section(surface: &CubicForm, plane: &Plane) -> Result<Self> {
        let f = surface.field();
        let basis = plane.basis(f);
        let piv = plane.coeffs().iter().position(|c| !c.is_zero()).unwrap();
        let free: Vec<usize> = (0..4).filter(|&i| i != piv).collect();
        let subs: Vec<HomPoly> = (0..4)
            .map(|j| HomPoly::linear(&[basis[0][j], basis[1][j], basis[2][j]]))
            .collect();
        let poly = surface.poly().substitute(f, &subs);
        if poly.is_zero() {
            return Err(Error::Degenerate("plane lies in the surface".into()));
        }
        Ok(PlaneCubic {
            form: CubicForm::from_poly(f, poly)?,
            chart: Some(Chart {
                plane: *plane,
                basis,
                free: [free[0], free[1], free[2]],
            }),
            smooth: OnceLock::new(),
        })
    }

    pub fn form(&self) -> &CubicForm {
        &self.form
    }

    pub fn field(&self) -> &FieldSpec {
        self.form.field()
    }

    pub fn plane(&self) -> Option<Plane> {
        self.chart.as_ref().map(|c| c.plane)
    }

    pub fn is_smooth(&self) -> bool {
        *self.smooth.get_or_init(|| self.form.is_smooth())
    }

    /// Rational points of the curve, in `P^2` coordinates.
    pub fn points(&self) -> Vec<ProjPoint> {
        self.form.points()
    }

    /// Chart coordinates of a point of the plane.
    pub fn push(&self, x: &ProjPoint) -> Result<ProjPoint> {
        match &self.chart {
            None => Ok(*x),
            Some(ch) => {
                if x.dim() != 3 || !ch.plane.contains(self.field(), x) {
                    return Err(Error::InvalidPoint(format!("{x:?} is not on the plane")));
                }
                let c = x.coords();
                ProjPoint::new(self.field(), &[c[ch.free[0]], c[ch.free[1]], c[ch.free[2]]])
            }
        }
    }

    /// The point of the plane with chart coordinates `u`.
    pub fn pull(&self, u: &ProjPoint) -> ProjPoint {
        match &self.chart {
            None => *u,
            Some(ch) => {
                let f = self.field();
                let mut v = vec![f.zero(); 4];
                for (b, &ui) in ch.basis.iter().zip(u.coords()) {
                    for (vj, &bj) in v.iter_mut().zip(b) {
                        *vj = f.add(*vj, f.mul(ui, bj));
                    }
                }
                ProjPoint::new(f, &v).unwrap()
            }
        }
    }

    fn require_smooth(&self, x: &ProjPoint) -> Result<()> {
        if x.dim() != 2 {
            return Err(Error::DimensionMismatch("expected a point of P^2".into()));
        }
        if !self.form.contains(x) {
            return Err(Error::NotOnForm);
        }
        if !self.form.is_smooth_point(x) {
            return Err(Error::SingularPoint);
        }
        Ok(())
    }

    /// The third intersection of the chord `xy`, or of the tangent at `x`
    /// when `x == y`.
    pub fn curve_third(&self, x: &ProjPoint, y: &ProjPoint) -> Result<ThirdResult> {
        self.require_smooth(x)?;
        self.require_smooth(y)?;
        Ok(self.third_unchecked(x, y))
    }

    fn third_unchecked(&self, x: &ProjPoint, y: &ProjPoint) -> ThirdResult {
        if x != y {
            return self.form.third_unchecked(x, y);
        }
        let f = self.field();
        let g = self.form.gradient(x.coords());
        let tangent = Plane::new(f, &g).unwrap();
        let v = tangent
            .basis(f)
            .into_iter()
            .map(|b| ProjPoint::new(f, &b).unwrap())
            .find(|v| v != x)
            .unwrap();
        let c = self.form.polar(v.coords(), x.coords());
        let d = self.form.eval(&v);
        if c.is_zero() && d.is_zero() {
            return ThirdResult::LineInV;
        }
        ThirdResult::Unique(ProjPoint::new(f, &combine(f, d, x, f.neg(c), &v)).unwrap())
    }

    /// `e ∘ (x ∘ y)`: the chord-tangent group law with neutral element `e`.
    pub fn curve_add(&self, e: &ProjPoint, x: &ProjPoint, y: &ProjPoint) -> Result<ProjPoint> {
        if !self.is_smooth() {
            return Err(Error::Hypothesis("the curve is singular".into()));
        }
        let undefined = || Error::Undefined("composition along a line of the curve".into());
        let s = self.curve_third(x, y)?.point().ok_or_else(undefined)?;
        self.curve_third(e, &s)?.point().ok_or_else(undefined)
    }
}

/// Precomputed chord-tangent composition on the rational points of a smooth
/// plane cubic.
#[derive(Clone, Debug)]
pub struct CompositionTable {
    points: Vec<ProjPoint>,
    index: HashMap<ProjPoint, usize>,
    table: Vec<Vec<u32>>,
}

impl CompositionTable {
    pub fn new(curve: &PlaneCubic) -> Result<Self> {
        if !curve.is_smooth() {
            return Err(Error::Hypothesis("the curve is singular".into()));
        }
        let points = curve.points();
        let index: HashMap<ProjPoint, usize> =
            points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let n = points.len();
        let mut table = vec![vec![0u32; n]; n];
        for i in 0..n {
            for j in i..n {
                let z = curve
                    .third_unchecked(&points[i], &points[j])
                    .point()
                    .expect("smooth cubics contain no line");
                let k = index[&z] as u32;
                table[i][j] = k;
                table[j][i] = k;
            }
        }
        Ok(CompositionTable {
            points,
            index,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn index_of(&self, x: &ProjPoint) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn third(&self, i: usize, j: usize) -> usize {
        self.table[i][j] as usize
    }

    pub fn add(&self, e: usize, i: usize, j: usize) -> usize {
        self.third(e, self.third(i, j))
    }

    /// Checks the group axioms for the law with neutral element `e`.
    pub fn check_group(&self, e: usize) -> bool {
        let n = self.len();
        (0..n).all(|x| self.add(e, x, e) == x)
            && (0..n).all(|x| (0..n).all(|y| self.add(e, x, y) == self.add(e, y, x)))
            && (0..n).all(|x| {
                (0..n).all(|y| {
                    let xy = self.add(e, x, y);
                    (0..n).all(|z| self.add(e, xy, z) == self.add(e, x, self.add(e, y, z)))
                })
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn fermat_curve_group_is_cyclic_of_order_three() {
        let f = FieldSpec::new(2, 1).unwrap();
        let c = PlaneCubic::new(corpus::fermat_curve(&f)).unwrap();
        let x = ProjPoint::from_ints(&f, &[1, 1, 0]).unwrap();
        assert_eq!(c.curve_third(&x, &x).unwrap(), ThirdResult::Unique(x));
        let t = CompositionTable::new(&c).unwrap();
        assert_eq!(t.len(), 3);
        for e in 0..3 {
            assert!(t.check_group(e));
        }
        let e = t.index_of(&x).unwrap();
        let g = (e + 1) % 3;
        assert_eq!(t.add(e, g, t.add(e, g, g)), e);
    }

    #[test]
    fn section_chart_round_trip() {
        let f = FieldSpec::new(2, 1).unwrap();
        let s = corpus::fermat_surface(&f);
        let t = Plane::from_ints(&f, &[1, 1, 0, 0]).unwrap();
        let c = s.plane_section(&t).unwrap();
        let on_section: Vec<ProjPoint> =
            s.points().into_iter().filter(|p| t.contains(&f, p)).collect();
        assert_eq!(c.points().len(), on_section.len());
        for p in &on_section {
            let u = c.push(p).unwrap();
            assert!(c.form().contains(&u));
            assert_eq!(c.pull(&u), *p);
        }
    }

    #[test]
    fn singular_points_are_rejected() {
        let f = FieldSpec::new(5, 1).unwrap();
        // Nodal cubic Y^2 Z = X^3 + X^2 Z, node at (0:0:1).
        let one = f.one();
        let form = CubicForm::from_terms(
            &f,
            2,
            &[
                ([0, 2, 1, 0], one),
                ([3, 0, 0, 0], f.neg(one)),
                ([2, 0, 1, 0], f.neg(one)),
            ],
        )
        .unwrap();
        let c = PlaneCubic::new(form).unwrap();
        let node = ProjPoint::from_ints(&f, &[0, 0, 1]).unwrap();
        let other = ProjPoint::from_ints(&f, &[0, 1, 0]).unwrap();
        assert_eq!(c.curve_third(&node, &other), Err(Error::SingularPoint));
        assert!(!c.is_smooth());
        assert!(CompositionTable::new(&c).is_err());
    }
}
