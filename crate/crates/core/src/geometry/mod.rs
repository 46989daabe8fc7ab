//! Exact projective geometry of cubic forms in `P^2` and `P^3`.

mod collinearity;
mod form;
mod section;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::field::{Embedding, FieldElem, FieldSpec};
use crate::linalg::{self, Row};

pub use collinearity::collinearity;
pub use form::{CubicForm, ThirdResult};
pub use section::{CompositionTable, PlaneCubic};

/// A point of `P^n` (`n <= 3`) normalized so the first nonzero coordinate is 1.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    len: u8,
    c: [FieldElem; 4],
}

impl ProjPoint {
    /// Normalizes `coords`; fails on the zero vector.
    pub fn new(f: &FieldSpec, coords: &[FieldElem]) -> Result<Self> {
        if !(2..=4).contains(&coords.len()) {
            return Err(Error::InvalidPoint(format!(
                "{} coordinates",
                coords.len()
            )));
        }
        let Some(lead) = coords.iter().find(|c| !c.is_zero()) else {
            return Err(Error::InvalidPoint("all coordinates are zero".into()));
        };
        if coords.iter().any(|&c| !f.contains(c)) {
            return Err(Error::FieldMismatch("coordinate outside the field".into()));
        }
        let inv = f.inv(*lead)?;
        let mut c = [FieldElem::ZERO; 4];
        for (dst, &src) in c.iter_mut().zip(coords) {
            *dst = f.mul(src, inv);
        }
        Ok(ProjPoint {
            len: coords.len() as u8,
            c,
        })
    }

    /// Builds a point from small integers (mapped through `Z -> F_p`).
    pub fn from_ints(f: &FieldSpec, coords: &[i64]) -> Result<Self> {
        let v: Vec<FieldElem> = coords.iter().map(|&n| f.from_int(n)).collect();
        ProjPoint::new(f, &v)
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.c[..self.len as usize]
    }

    /// Dimension of the ambient projective space.
    pub fn dim(&self) -> usize {
        self.len as usize - 1
    }

    pub fn pivot(&self) -> usize {
        self.coords().iter().position(|c| !c.is_zero()).unwrap()
    }

    pub fn map(&self, emb: &Embedding) -> ProjPoint {
        let v: Vec<FieldElem> = self.coords().iter().map(|&c| emb.apply(c)).collect();
        ProjPoint::new(emb.target(), &v).unwrap()
    }

    /// Descends a point to the source field of `emb`, if it is rational there.
    pub fn descend(&self, emb: &Embedding) -> Option<ProjPoint> {
        let v: Option<Vec<FieldElem>> = self.coords().iter().map(|&c| emb.preimage(c)).collect();
        ProjPoint::new(emb.source(), &v?).ok()
    }

    pub fn to_json(&self, f: &FieldSpec) -> Vec<Vec<u32>> {
        self.coords().iter().map(|&c| f.coeffs(c)).collect()
    }

    pub fn from_json(f: &FieldSpec, v: &[Vec<u32>]) -> Result<Self> {
        let coords: Result<Vec<FieldElem>> = v.iter().map(|c| f.elem_from_coeffs(c)).collect();
        ProjPoint::new(f, &coords?)
    }
}

impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.len, self.pivot(), self.coords()).cmp(&(other.len, other.pivot(), other.coords()))
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{}", c.index())?;
        }
        write!(f, ")")
    }
}

/// Linear combination `a*x + b*y` of two points' coordinate vectors.
pub(crate) fn combine(
    f: &FieldSpec,
    a: FieldElem,
    x: &ProjPoint,
    b: FieldElem,
    y: &ProjPoint,
) -> Vec<FieldElem> {
    x.coords()
        .iter()
        .zip(y.coords())
        .map(|(&u, &v)| f.add(f.mul(a, u), f.mul(b, v)))
        .collect()
}

type PointCache = Mutex<HashMap<(usize, u32, u32), Arc<Vec<ProjPoint>>>>;

/// All points of `P^dim(F_q)` in canonical order: by position of the leading
/// 1, then lexicographically. There are `(q^(dim+1) - 1)/(q - 1)` of them.
pub fn enumerate_proj_points(dim: usize, f: &FieldSpec) -> Arc<Vec<ProjPoint>> {
    static CACHE: OnceLock<PointCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (dim, f.p(), f.e());
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return v.clone();
    }
    let q = f.q() as u64;
    let mut out = Vec::new();
    for pivot in 0..=dim {
        let free = dim - pivot;
        for n in 0..q.pow(free as u32) {
            let mut c = [FieldElem::ZERO; 4];
            c[pivot] = f.one();
            let mut m = n;
            for k in (pivot + 1..=dim).rev() {
                c[k] = FieldElem((m % q) as u32);
                m /= q;
            }
            out.push(ProjPoint {
                len: dim as u8 + 1,
                c,
            });
        }
    }
    let out = Arc::new(out);
    cache.lock().unwrap().insert(key, out.clone());
    out
}

/// A line of `P^2` or `P^3`, stored as the reduced row echelon basis of its
/// 2-dimensional span.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Line {
    a: ProjPoint,
    b: ProjPoint,
}

impl Line {
    pub fn through(f: &FieldSpec, x: &ProjPoint, y: &ProjPoint) -> Result<Line> {
        if x.len != y.len {
            return Err(Error::DimensionMismatch("points of different spaces".into()));
        }
        if x == y {
            return Err(Error::SamePoint);
        }
        let mut rows: Vec<Row> = vec![x.coords().to_vec(), y.coords().to_vec()];
        let piv = linalg::rref(f, &mut rows);
        debug_assert_eq!(piv.len(), 2);
        Ok(Line {
            a: ProjPoint::new(f, &rows[0])?,
            b: ProjPoint::new(f, &rows[1])?,
        })
    }

    pub fn basis(&self) -> (ProjPoint, ProjPoint) {
        (self.a, self.b)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn contains(&self, f: &FieldSpec, x: &ProjPoint) -> bool {
        let rows = vec![
            self.a.coords().to_vec(),
            self.b.coords().to_vec(),
            x.coords().to_vec(),
        ];
        linalg::rank(f, &rows) == 2
    }

    /// The `q + 1` rational points, sorted.
    pub fn points(&self, f: &FieldSpec) -> Vec<ProjPoint> {
        let mut out: Vec<ProjPoint> = f
            .elements()
            .map(|t| ProjPoint::new(f, &combine(f, f.one(), &self.a, t, &self.b)).unwrap())
            .collect();
        out.push(self.b);
        out.sort();
        out
    }

    pub fn map(&self, emb: &Embedding) -> Line {
        Line::through(emb.target(), &self.a.map(emb), &self.b.map(emb)).unwrap()
    }
}

/// All lines of `P^dim(F_q)`, enumerated through their echelon forms.
pub fn enumerate_lines(dim: usize, f: &FieldSpec) -> Vec<Line> {
    let q = f.q() as u64;
    let n = dim + 1;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            // Free entries: row a at k > i, k != j; row b at k > j.
            let free_a: Vec<usize> = (i + 1..n).filter(|&k| k != j).collect();
            let free_b: Vec<usize> = (j + 1..n).collect();
            let total = free_a.len() + free_b.len();
            for m in 0..q.pow(total as u32) {
                let mut a = [FieldElem::ZERO; 4];
                let mut b = [FieldElem::ZERO; 4];
                a[i] = f.one();
                b[j] = f.one();
                let mut r = m;
                for &k in free_b.iter().rev() {
                    b[k] = FieldElem((r % q) as u32);
                    r /= q;
                }
                for &k in free_a.iter().rev() {
                    a[k] = FieldElem((r % q) as u32);
                    r /= q;
                }
                out.push(Line {
                    a: ProjPoint { len: n as u8, c: a },
                    b: ProjPoint { len: n as u8, c: b },
                });
            }
        }
    }
    out
}

/// A plane in `P^3` (or a line in `P^2`) given by its normalized coefficient
/// vector.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Plane {
    coeffs: ProjPoint,
}

impl Plane {
    pub fn new(f: &FieldSpec, coeffs: &[FieldElem]) -> Result<Plane> {
        Ok(Plane {
            coeffs: ProjPoint::new(f, coeffs)?,
        })
    }

    pub fn from_ints(f: &FieldSpec, coeffs: &[i64]) -> Result<Plane> {
        Ok(Plane {
            coeffs: ProjPoint::from_ints(f, coeffs)?,
        })
    }

    /// The unique hyperplane through `pts` (3 points in `P^3`, 2 in `P^2`).
    pub fn through(f: &FieldSpec, pts: &[ProjPoint]) -> Result<Plane> {
        let n = pts.first().map_or(0, |p| p.len as usize);
        if pts.len() + 1 != n {
            return Err(Error::DimensionMismatch(format!(
                "{} points do not determine a hyperplane of P^{}",
                pts.len(),
                n.saturating_sub(1)
            )));
        }
        let rows: Vec<Row> = pts.iter().map(|p| p.coords().to_vec()).collect();
        let ker = linalg::nullspace(f, &rows, n);
        if ker.len() != 1 {
            return Err(Error::Degenerate("points do not span a hyperplane".into()));
        }
        Plane::new(f, &ker[0])
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        self.coeffs.coords()
    }

    pub fn contains(&self, f: &FieldSpec, x: &ProjPoint) -> bool {
        linalg::dot(f, self.coeffs(), x.coords()).is_zero()
    }

    pub fn contains_line(&self, f: &FieldSpec, l: &Line) -> bool {
        self.contains(f, &l.a) && self.contains(f, &l.b)
    }

    /// Canonical basis of the underlying linear subspace.
    pub fn basis(&self, f: &FieldSpec) -> Vec<Row> {
        linalg::nullspace(f, &[self.coeffs().to_vec()], self.coeffs.len as usize)
    }

    /// Rational points of the hyperplane, sorted.
    pub fn points(&self, f: &FieldSpec) -> Vec<ProjPoint> {
        enumerate_proj_points(self.coeffs.dim(), f)
            .iter()
            .filter(|x| self.contains(f, x))
            .copied()
            .collect()
    }

    /// Intersection with a line not contained in the plane.
    pub fn meet_line(&self, f: &FieldSpec, l: &Line) -> Option<ProjPoint> {
        let (a, b) = l.basis();
        let ta = linalg::dot(f, self.coeffs(), a.coords());
        let tb = linalg::dot(f, self.coeffs(), b.coords());
        if ta.is_zero() && tb.is_zero() {
            return None;
        }
        // tb*a - ta*b lies on the plane.
        ProjPoint::new(f, &combine(f, tb, &a, f.neg(ta), &b)).ok()
    }

    pub fn map(&self, emb: &Embedding) -> Plane {
        Plane {
            coeffs: self.coeffs.map(emb),
        }
    }
}

/// All planes of `P^3(F_q)` (equivalently, points of the dual space).
pub fn enumerate_planes(f: &FieldSpec) -> Vec<Plane> {
    enumerate_proj_points(3, f)
        .iter()
        .map(|&coeffs| Plane { coeffs })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(enumerate_proj_points(2, &f2).len(), 7);
        assert_eq!(enumerate_proj_points(3, &f3).len(), 40);
        let p3 = enumerate_proj_points(3, &f2);
        assert_eq!(p3.len(), 15);
        assert_eq!(p3[0], ProjPoint::from_ints(&f2, &[1, 0, 0, 0]).unwrap());
        let mut sorted = p3.to_vec();
        sorted.sort();
        assert_eq!(sorted, *p3);
    }

    #[test]
    fn line_counts_match_the_formula() {
        for q in [2u32, 3, 4, 5] {
            let f = FieldSpec::with_order(q).unwrap();
            let q = q as usize;
            let lines = enumerate_lines(3, &f);
            assert_eq!(lines.len(), (q * q + 1) * (q * q + q + 1));
            let set: std::collections::HashSet<_> = lines.iter().collect();
            assert_eq!(set.len(), lines.len());
            assert_eq!(enumerate_lines(2, &f).len(), q * q + q + 1);
            for l in lines.iter().take(20) {
                let pts = l.points(&f);
                assert_eq!(pts.len(), q + 1);
                assert_eq!(Line::through(&f, &pts[0], &pts[1]).unwrap(), *l);
            }
        }
    }

    #[test]
    fn normalization_is_canonical() {
        let f = FieldSpec::new(7, 1).unwrap();
        let a = ProjPoint::from_ints(&f, &[0, 3, 6, 1]).unwrap();
        let b = ProjPoint::from_ints(&f, &[0, 1, 2, 5]).unwrap();
        assert_eq!(a, b);
        assert!(ProjPoint::from_ints(&f, &[0, 0, 0]).is_err());
    }

    #[test]
    fn plane_meets_line() {
        let f = FieldSpec::new(5, 1).unwrap();
        let t = Plane::from_ints(&f, &[1, 1, 0, 0]).unwrap();
        let x = ProjPoint::from_ints(&f, &[1, 0, 0, 0]).unwrap();
        let y = ProjPoint::from_ints(&f, &[0, 1, 1, 0]).unwrap();
        let l = Line::through(&f, &x, &y).unwrap();
        let m = t.meet_line(&f, &l).unwrap();
        assert!(t.contains(&f, &m) && l.contains(&f, &m));
        assert_eq!(t.points(&f).len(), 31);
    }
}
