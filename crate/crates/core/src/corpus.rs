//! Named cubic forms and seeded random samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldElem, FieldSpec};
use crate::geometry::CubicForm;

fn diagonal(f: &FieldSpec, weights: &[FieldElem]) -> CubicForm {
    let dim = weights.len() - 1;
    let terms: Vec<([u8; 4], FieldElem)> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let mut e = [0u8; 4];
            e[i] = 3;
            (e, w)
        })
        .collect();
    CubicForm::from_terms(f, dim, &terms).expect("diagonal form is nonzero")
}

/// `X^3 + Y^3 + Z^3`.
pub fn fermat_curve(f: &FieldSpec) -> CubicForm {
    diagonal(f, &[f.one(); 3])
}

/// `X^3 + Y^3 + Z^3 + W^3`.
pub fn fermat_surface(f: &FieldSpec) -> CubicForm {
    diagonal(f, &[f.one(); 4])
}

/// `X^3 + Y^3 + Z^3 + c W^3`.
pub fn diagonal_surface(f: &FieldSpec, c: FieldElem) -> CubicForm {
    diagonal(f, &[f.one(), f.one(), f.one(), c])
}

/// `X^3 + Y^3 + Z^3 + a W^3` with `a` the field generator.
pub fn diagonal_a_surface(f: &FieldSpec) -> CubicForm {
    diagonal_surface(f, f.generator())
}

/// A uniformly random nonzero cubic form.
pub fn random_form(f: &FieldSpec, dim: usize, rng: &mut impl Rng) -> CubicForm {
    let n = if dim == 2 { 10 } else { 20 };
    loop {
        let coeffs: Vec<FieldElem> = (0..n)
            .map(|_| FieldElem(rng.gen_range(0..f.q())))
            .collect();
        if let Ok(c) = CubicForm::new(f, dim, coeffs) {
            return c;
        }
    }
}

/// `count` smooth forms drawn from a seeded generator.
pub fn random_smooth(f: &FieldSpec, dim: usize, count: usize, seed: u64) -> Vec<CubicForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let c = random_form(f, dim, &mut rng);
        if c.is_smooth() {
            out.push(c);
        }
    }
    out
}

/// The form over F_2 whose coefficient vector is the bit pattern of `mask`
/// (bit `i` is the coefficient of the `i`-th cubic monomial).
pub fn f2_form(mask: u32) -> Option<CubicForm> {
    let f = FieldSpec::new(2, 1).unwrap();
    let coeffs = (0..20).map(|i| FieldElem((mask >> i) & 1)).collect();
    CubicForm::new(&f, 3, coeffs).ok()
}
