use std::collections::HashMap;

use super::{enumerate_lines, CubicForm, ProjPoint, ThirdResult};
use crate::cubic::AbstractCubic;
use crate::error::{Error, Result};

/// The abstract cubic of smooth rational points of `form`, labelled by the
/// points in canonical order.
///
/// Distinct pairs contribute their residual intersection, diagonal pairs the
/// tangent composition, and every rational line contained in the form all
/// triples of its smooth points (such pairs are flagged).
pub fn collinearity(form: &CubicForm) -> Result<AbstractCubic> {
    let f = form.field();
    let pts: Vec<ProjPoint> = form
        .points()
        .into_iter()
        .filter(|p| form.is_smooth_point(p))
        .collect();
    if pts.is_empty() {
        return Err(Error::InvalidInput("no smooth rational points".into()));
    }
    let n = pts.len();
    let index: HashMap<ProjPoint, usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut triples = Vec::new();
    let mut on_line = vec![false; n * n];
    let mut line_pairs = Vec::new();

    // Cheap prefilter: a line in the form meets it in at least two smooth
    // points or consists of singular points.
    for l in enumerate_lines(form.dim(), f) {
        let (a, b) = l.basis();
        if !form.contains(&a) || !form.contains(&b) || !form.contains_line(&l) {
            continue;
        }
        let idx: Vec<usize> = l.points(f).iter().filter_map(|p| index.get(p).copied()).collect();
        for (i, &x) in idx.iter().enumerate() {
            for (j, &y) in idx.iter().enumerate().skip(i) {
                if x != y && !on_line[x * n + y] {
                    on_line[x * n + y] = true;
                    on_line[y * n + x] = true;
                    line_pairs.push((x.min(y), x.max(y)));
                }
                for &z in &idx[j..] {
                    triples.push([x, y, z]);
                }
            }
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            if on_line[i * n + j] {
                continue;
            }
            if let ThirdResult::Unique(z) = form.third_unchecked(&pts[i], &pts[j]) {
                if let Some(&k) = index.get(&z) {
                    triples.push([i, j, k]);
                }
            }
        }
    }

    for (i, x) in pts.iter().enumerate() {
        for z in form.tangent_compose(x)? {
            if let Some(&k) = index.get(&z) {
                triples.push([i, i, k]);
            }
        }
    }

    AbstractCubic::from_triples(n, triples)?
        .with_line_pairs(line_pairs)?
        .with_labels(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::FieldSpec;

    #[test]
    fn fermat_curve_over_f2() {
        let f = FieldSpec::new(2, 1).unwrap();
        let c = collinearity(&corpus::fermat_curve(&f)).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.contains([0, 1, 2]));
        for x in 0..3 {
            assert!(c.contains([x, x, x]));
        }
        assert!(c.validate(true).is_valid());
        assert!(c.is_total_single_valued());
    }

    #[test]
    fn fermat_surface_over_f2() {
        let f = FieldSpec::new(2, 1).unwrap();
        let c = collinearity(&corpus::fermat_surface(&f)).unwrap();
        assert_eq!(c.len(), 7);
        assert!(c.line_pairs().count() > 0);
        assert!(c.validate(false).is_valid());
        assert!(!c.validate(true).is_valid());
        assert!(!c.is_total_single_valued());
    }
}
