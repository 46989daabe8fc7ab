//! Gaussian elimination over a [`FieldSpec`].

use crate::field::{FieldElem, FieldSpec};

pub type Row = Vec<FieldElem>;

/// Reduces `rows` in place to reduced row echelon form and returns the pivot
/// columns. Zero rows are dropped.
pub fn rref(f: &FieldSpec, rows: &mut Vec<Row>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let t = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = f.sub(*x, f.mul(t, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &FieldSpec, rows: &[Row]) -> usize {
    if f.q() == 2 {
        let bits: Vec<u128> = rows.iter().map(|r| pack_gf2(r)).collect();
        if rows.first().map_or(true, |r| r.len() <= 128) {
            return gf2_rank(bits);
        }
    }
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

fn pack_gf2(r: &[FieldElem]) -> u128 {
    r.iter()
        .enumerate()
        .fold(0u128, |acc, (i, x)| acc | ((x.index() as u128 & 1) << i))
}

/// Rank of a GF(2) matrix whose rows are bit masks.
pub fn gf2_rank(mut rows: Vec<u128>) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let r = rows[i];
        if r == 0 {
            continue;
        }
        rank += 1;
        let low = r & r.wrapping_neg();
        for row in rows.iter_mut().skip(i + 1) {
            if *row & low != 0 {
                *row ^= r;
            }
        }
    }
    rank
}

/// Basis of the right kernel `{v : M v = 0}`. Each basis vector has a 1 in
/// exactly one free column and 0 in the others, so the basis is canonical.
pub fn nullspace(f: &FieldSpec, rows: &[Row], ncols: usize) -> Vec<Row> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(m[r][free]);
        }
        out.push(v);
    }
    out
}

pub fn dot(f: &FieldSpec, a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn det3(f: &FieldSpec, m: [[FieldElem; 3]; 3]) -> FieldElem {
    let t = |a, b, c| f.mul(f.mul(a, b), c);
    let pos = f.add(
        f.add(t(m[0][0], m[1][1], m[2][2]), t(m[0][1], m[1][2], m[2][0])),
        t(m[0][2], m[1][0], m[2][1]),
    );
    let neg = f.add(
        f.add(t(m[0][2], m[1][1], m[2][0]), t(m[0][0], m[1][2], m[2][1])),
        t(m[0][1], m[1][0], m[2][2]),
    );
    f.sub(pos, neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_rank_deficient_matrix() {
        let f = FieldSpec::new(7, 1).unwrap();
        let e = |n| f.from_int(n);
        let rows = vec![vec![e(1), e(2), e(3)], vec![e(2), e(4), e(6)]];
        assert_eq!(rank(&f, &rows), 1);
        let ker = nullspace(&f, &rows, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(dot(&f, &rows[0], v).is_zero());
        }
    }

    #[test]
    fn gf2_fast_path_agrees_with_generic() {
        let f = FieldSpec::new(2, 1).unwrap();
        let e = |n| f.from_int(n);
        let rows = vec![
            vec![e(1), e(1), e(0), e(1)],
            vec![e(0), e(1), e(1), e(0)],
            vec![e(1), e(0), e(1), e(1)],
        ];
        let mut m = rows.clone();
        assert_eq!(rref(&f, &mut m).len(), 2);
        assert_eq!(rank(&f, &rows), 2);
    }
}
