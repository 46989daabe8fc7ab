//! Dense homogeneous polynomials in up to four variables.
//!
//! Monomials of a fixed degree are ordered by exponent tuple, lexicographically
//! descending: for cubics in `X, Y, Z, W` that is `X^3, X^2Y, X^2Z, X^2W,
//! XY^2, ..., W^3`. Coefficient vectors of [`HomPoly`] follow that order.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::field::{FieldElem, FieldSpec};

pub type Exps = [u8; 4];

const MAX_VARS: usize = 4;
const MAX_DEG: usize = 12;

struct Table {
    list: Vec<Exps>,
    index: HashMap<Exps, usize>,
}

fn build(nvars: usize, degree: usize) -> Table {
    fn rec(var: usize, nvars: usize, left: usize, cur: &mut Exps, out: &mut Vec<Exps>) {
        if var == nvars - 1 {
            cur[var] = left as u8;
            out.push(*cur);
            cur[var] = 0;
            return;
        }
        for k in (0..=left).rev() {
            cur[var] = k as u8;
            rec(var + 1, nvars, left - k, cur, out);
        }
        cur[var] = 0;
    }
    let mut list = Vec::new();
    rec(0, nvars, degree, &mut [0; 4], &mut list);
    let index = list.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    Table { list, index }
}

fn table(nvars: usize, degree: usize) -> &'static Table {
    static TABLES: OnceLock<Vec<OnceLock<Table>>> = OnceLock::new();
    assert!((1..=MAX_VARS).contains(&nvars) && degree <= MAX_DEG);
    let all = TABLES.get_or_init(|| {
        (0..MAX_VARS * (MAX_DEG + 1))
            .map(|_| OnceLock::new())
            .collect()
    });
    all[(nvars - 1) * (MAX_DEG + 1) + degree].get_or_init(|| build(nvars, degree))
}

/// Monomials of `degree` in `nvars` variables, in canonical order.
pub fn monomials(nvars: usize, degree: usize) -> &'static [Exps] {
    &table(nvars, degree).list
}

pub fn monomial_index(nvars: usize, degree: usize, e: &Exps) -> usize {
    table(nvars, degree).index[e]
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomPoly {
    pub nvars: usize,
    pub degree: usize,
    pub coeffs: Vec<FieldElem>,
}

impl HomPoly {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        HomPoly {
            nvars,
            degree,
            coeffs: vec![FieldElem::ZERO; monomials(nvars, degree).len()],
        }
    }

    pub fn from_coeffs(nvars: usize, degree: usize, coeffs: Vec<FieldElem>) -> Self {
        assert_eq!(coeffs.len(), monomials(nvars, degree).len());
        HomPoly {
            nvars,
            degree,
            coeffs,
        }
    }

    /// The linear form `sum c_i X_i`.
    pub fn linear(coeffs: &[FieldElem]) -> Self {
        // Linear monomials in canonical order are X_0, X_1, ...
        HomPoly::from_coeffs(coeffs.len(), 1, coeffs.to_vec())
    }

    pub fn monomials(&self) -> &'static [Exps] {
        monomials(self.nvars, self.degree)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&'static Exps, FieldElem)> + '_ {
        self.monomials()
            .iter()
            .zip(self.coeffs.iter().copied())
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn eval(&self, f: &FieldSpec, x: &[FieldElem]) -> FieldElem {
        debug_assert_eq!(x.len(), self.nvars);
        let mut pows = [[FieldElem::ZERO; MAX_DEG + 1]; MAX_VARS];
        for (i, &xi) in x.iter().enumerate() {
            pows[i][0] = f.one();
            for k in 1..=self.degree {
                pows[i][k] = f.mul(pows[i][k - 1], xi);
            }
        }
        let mut acc = f.zero();
        for (e, c) in self.terms() {
            let mut t = c;
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t = f.mul(t, pows[i][e[i] as usize]);
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial(&self, f: &FieldSpec, var: usize) -> HomPoly {
        if self.degree == 0 {
            return HomPoly::zero(self.nvars, 0);
        }
        let mut out = HomPoly::zero(self.nvars, self.degree - 1);
        for (e, c) in self.terms() {
            if e[var] == 0 {
                continue;
            }
            let k = f.from_int(e[var] as i64);
            let mut d = *e;
            d[var] -= 1;
            let idx = monomial_index(self.nvars, self.degree - 1, &d);
            out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(c, k));
        }
        out
    }

    pub fn mul(&self, f: &FieldSpec, other: &HomPoly) -> HomPoly {
        assert_eq!(self.nvars, other.nvars);
        let deg = self.degree + other.degree;
        let mut out = HomPoly::zero(self.nvars, deg);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let mut e = [0u8; 4];
                for i in 0..self.nvars {
                    e[i] = a[i] + b[i];
                }
                let idx = monomial_index(self.nvars, deg, &e);
                out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(ca, cb));
            }
        }
        out
    }

    pub fn add(&self, f: &FieldSpec, other: &HomPoly) -> HomPoly {
        assert_eq!((self.nvars, self.degree), (other.nvars, other.degree));
        HomPoly {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, f: &FieldSpec, s: FieldElem) -> HomPoly {
        HomPoly {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, s)).collect(),
        }
    }

    /// Substitutes `subs[i]` for variable `i`. All substitutes must share
    /// the same number of variables and the same degree.
    pub fn substitute(&self, f: &FieldSpec, subs: &[HomPoly]) -> HomPoly {
        assert_eq!(subs.len(), self.nvars);
        let nv = subs[0].nvars;
        let d = subs[0].degree;
        let mut pows: Vec<Vec<HomPoly>> = Vec::with_capacity(subs.len());
        for s in subs {
            let mut v = vec![HomPoly::from_coeffs(nv, 0, vec![f.one()])];
            for k in 1..=self.degree {
                let next = v[k - 1].mul(f, s);
                v.push(next);
            }
            pows.push(v);
        }
        let mut out = HomPoly::zero(nv, self.degree * d);
        for (e, c) in self.terms() {
            let mut t = HomPoly::from_coeffs(nv, 0, vec![c]);
            for i in 0..self.nvars {
                if e[i] > 0 {
                    t = t.mul(f, &pows[i][e[i] as usize]);
                }
            }
            out = out.add(f, &t);
        }
        out
    }

    /// Re-expresses the coefficients through a field embedding.
    pub fn map_coeffs(&self, g: impl Fn(FieldElem) -> FieldElem) -> HomPoly {
        HomPoly {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|&c| g(c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_monomial_order() {
        let m = monomials(4, 3);
        assert_eq!(m.len(), 20);
        assert_eq!(m[0], [3, 0, 0, 0]);
        assert_eq!(m[1], [2, 1, 0, 0]);
        assert_eq!(m[2], [2, 0, 1, 0]);
        assert_eq!(m[3], [2, 0, 0, 1]);
        assert_eq!(m[4], [1, 2, 0, 0]);
        assert_eq!(m[19], [0, 0, 0, 3]);
        assert_eq!(monomials(3, 3).len(), 10);
        assert_eq!(monomials(3, 9).len(), 55);
        assert_eq!(monomial_index(4, 3, &[0, 3, 0, 0]), 10);
    }

    #[test]
    fn substitution_matches_evaluation() {
        let f = FieldSpec::new(5, 1).unwrap();
        let e = |n| f.from_int(n);
        // g = X^2 Y + 3 Z^3 in three variables
        let mut g = HomPoly::zero(3, 3);
        g.coeffs[monomial_index(3, 3, &[2, 1, 0, 0])] = e(1);
        g.coeffs[monomial_index(3, 3, &[0, 0, 3, 0])] = e(3);
        // X -> a+b, Y -> 2a, Z -> b in two variables
        let subs = [
            HomPoly::linear(&[e(1), e(1)]),
            HomPoly::linear(&[e(2), e(0)]),
            HomPoly::linear(&[e(0), e(1)]),
        ];
        let h = g.substitute(&f, &subs);
        for a in f.elements() {
            for b in f.elements() {
                let x = [f.add(a, b), f.mul(e(2), a), b];
                assert_eq!(h.eval(&f, &[a, b]), g.eval(&f, &x));
            }
        }
    }

    #[test]
    fn partials_in_characteristic_two() {
        let f = FieldSpec::new(2, 1).unwrap();
        let mut g = HomPoly::zero(4, 3);
        for c in g.coeffs.iter_mut().take(2) {
            *c = f.one(); // X^3 + X^2 Y
        }
        let dx = g.partial(&f, 0);
        // d/dX = 3X^2 + 2XY = X^2
        assert_eq!(dx.coeffs[monomial_index(4, 2, &[2, 0, 0, 0])], f.one());
        assert_eq!(dx.coeffs[monomial_index(4, 2, &[1, 1, 0, 0])], f.zero());
        let dy = g.partial(&f, 1);
        assert_eq!(dy.coeffs[monomial_index(4, 2, &[2, 0, 0, 0])], f.one());
    }
}
