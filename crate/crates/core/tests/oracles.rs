//! Library results against independent brute-force computations.

use std::collections::BTreeSet;

use cubic_compose::corpus;
use cubic_compose::cubic::AbstractCubic;
use cubic_compose::equivalence::{is_admissible, universal, Partition};
use cubic_compose::error::Error;
use cubic_compose::field::{Embedding, FieldElem, FieldSpec};
use cubic_compose::geometry::{collinearity, enumerate_proj_points, CubicForm, Line, PlaneCubic, ProjPoint};
use cubic_compose::linalg::det3;
use cubic_compose::split::{compose_t_lambda, BaseConfig, LineTriple, ReflectionCheck, SplitSurface};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Singular points over the extension, found by scanning it.
fn has_singular_point_over(form: &CubicForm, big: &FieldSpec) -> bool {
    let emb = Embedding::new(form.field(), big).unwrap();
    let g = form.base_change(&emb).unwrap();
    enumerate_proj_points(form.dim(), big)
        .par_iter()
        .any(|x| g.eval(x).is_zero() && g.gradient(x.coords()).iter().all(|c| c.is_zero()))
}

#[test]
fn plane_cubic_smoothness_matches_extension_scan() {
    // Singular points of a plane cubic are defined over an extension of
    // degree at most 3, all of which sit inside F_64.
    let f2 = FieldSpec::with_order(2).unwrap();
    let f64 = FieldSpec::with_order(64).unwrap();
    let mut smooth = 0;
    for mask in 1u32..1 << 10 {
        let coeffs: Vec<FieldElem> = (0..10)
            .map(|i| if mask >> i & 1 == 1 { f2.one() } else { f2.zero() })
            .collect();
        let c = CubicForm::new(&f2, 2, coeffs).unwrap();
        let scan = !has_singular_point_over(&c, &f64);
        assert_eq!(c.is_smooth(), scan, "mask {mask}");
        smooth += scan as usize;
    }
    assert!(smooth > 0);
}

#[test]
fn surface_smoothness_matches_extension_scan() {
    let f8 = FieldSpec::with_order(8).unwrap();
    let f16 = FieldSpec::with_order(16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut smooth = 0;
    for _ in 0..150 {
        let mask = rng.gen_range(1u32..1 << 20);
        let c = corpus::f2_form(mask).unwrap();
        let scan = !has_singular_point_over(&c, &f8) && !has_singular_point_over(&c, &f16);
        assert_eq!(c.is_smooth(), scan, "mask {mask}");
        smooth += scan as usize;
    }
    assert!(smooth > 20 && smooth < 150);
}

/// Every set partition of `0..n`, as class labels.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max {
            cur[i] = c;
            rec(i + 1, max.max(c + 1), cur, out);
        }
    }
    if n > 0 {
        rec(1, 1, &mut cur, &mut out);
    }
    out
}

fn admissible_by_triples(p: &AbstractCubic, cls: &[usize]) -> bool {
    let mut seen = std::collections::BTreeMap::<(usize, usize), BTreeSet<usize>>::new();
    for &[a, b, c] in p.triples() {
        for (x, y, z) in [(a, b, c), (a, c, b), (b, c, a)] {
            seen.entry((cls[x].min(cls[y]), cls[x].max(cls[y])))
                .or_default()
                .insert(cls[z]);
        }
    }
    seen.values().all(|s| s.len() == 1)
}

#[test]
fn universal_is_the_finest_admissible_partition() {
    let f2 = FieldSpec::with_order(2).unwrap();
    let f4 = FieldSpec::with_order(4).unwrap();
    let mut cubics = vec![
        collinearity(&corpus::fermat_curve(&f2)).unwrap(),
        collinearity(&corpus::diagonal_a_surface(&f4)).unwrap(),
        collinearity(&corpus::f2_form(69128).unwrap()).unwrap(),
    ];
    cubics.extend(
        corpus::random_smooth(&f2, 3, 40, 21)
            .iter()
            .map(|c| collinearity(c).unwrap())
            .filter(|p| p.len() <= 7)
            .take(6),
    );
    for p in &cubics {
        let (u, _) = universal(p);
        assert!(admissible_by_triples(p, &u.class_ids()));
        for labels in set_partitions(p.len()) {
            let r = Partition::from_labels(&labels);
            let oracle = admissible_by_triples(p, &labels);
            assert_eq!(is_admissible(p, &r, false), oracle, "{labels:?}");
            if oracle {
                assert!(u.refines(&r), "{labels:?}");
            }
        }
    }
}

fn f7_surface() -> SplitSurface {
    let f = FieldSpec::with_order(7).unwrap();
    SplitSurface::build(BaseConfig::search(&f).unwrap()).unwrap()
}

fn collinear(f: &FieldSpec, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    let (a, b, c) = (a.coords(), b.coords(), c.coords());
    det3(f, [[a[0], a[1], a[2]], [b[0], b[1], b[2]], [c[0], c[1], c[2]]]).is_zero()
}

#[test]
fn modified_composition_matches_search_on_image_points() {
    let s = f7_surface();
    let f = s.field().clone();
    let mut checked = 0;
    for t in s.admissible_planes().into_iter().step_by(7) {
        let section = s.section_points(&t);
        let images: Vec<(ProjPoint, ProjPoint)> =
            section.iter().map(|z| (s.project(z).unwrap(), *z)).collect();
        for x in section.iter().filter(|x| s.exceptional_index(x).is_none()) {
            for y in section.iter().filter(|y| s.exceptional_index(y).is_none() && *y != x) {
                let (px, py) = (s.project(x).unwrap(), s.project(y).unwrap());
                if px == py {
                    continue;
                }
                let rest: BTreeSet<ProjPoint> = images
                    .iter()
                    .map(|(w, _)| *w)
                    .filter(|w| *w != px && *w != py && collinear(&f, &px, &py, w))
                    .collect();
                if rest.len() != 1 {
                    continue;
                }
                let w = *rest.iter().next().unwrap();
                let got = s.compose_cp(&t, x, y).unwrap();
                let lifts: Vec<ProjPoint> =
                    images.iter().filter(|(v, _)| *v == w).map(|(_, z)| *z).collect();
                assert!(lifts.contains(&got.point), "plane {t:?}");
                if let Some(i) = s.base().points.iter().position(|b| *b == w) {
                    assert_eq!(got.exceptional, Some(i));
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 500, "{checked}");
}

#[test]
fn nested_composition_recovers_modified_composition() {
    let s = f7_surface();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let planes = s.admissible_planes();
    let mut checked = 0;
    for _ in 0..3000 {
        let i = rng.gen_range(0..6);
        let j = (i + rng.gen_range(1..6)) % 6;
        let lambda = s.exceptional_triple(i, j).unwrap();
        let t = planes[rng.gen_range(0..planes.len())];
        let pts = s.section_points(&t);
        let (u, w) = (pts[rng.gen_range(0..pts.len())], pts[rng.gen_range(0..pts.len())]);
        if let (Ok(a), Ok(b)) = (compose_t_lambda(s.surface(), &lambda, &t, &u, &w), s.compose_cp(&t, &u, &w)) {
            assert_eq!(a, b.point);
            checked += 1;
        }
    }
    assert!(checked > 200, "{checked}");
}

#[test]
fn conic_line_triple_fails_the_hypothesis() {
    let s = f7_surface();
    let lambda = LineTriple::new(s.surface(), s.exceptional()[0], s.exceptional()[1], s.conic_line(2)).unwrap();
    let t = s.admissible_planes()[0];
    assert!(matches!(s.claim_577_check(&lambda, &t), Err(Error::Hypothesis(_))));
    let other: Line = s.base_line(0, 1);
    let lambda = LineTriple::new(s.surface(), other, s.exceptional()[2], s.conic_line(0));
    if let Ok(lambda) = lambda {
        assert!(matches!(s.claim_577_check(&lambda, &t), Err(Error::Hypothesis(_))));
    }
}

#[test]
fn reflections_preserve_composition_modulo_u3() {
    let f = FieldSpec::with_order(7).unwrap();
    let terms = [
        ([3, 0, 0, 0], f.one()),
        ([0, 2, 1, 0], f.from_int(-1)),
        ([0, 0, 3, 0], f.from_int(3)),
    ];
    let curve = PlaneCubic::new(CubicForm::from_terms(&f, 2, &terms).unwrap()).unwrap();
    let check = ReflectionCheck::new(curve).unwrap();
    let pts = check.points().to_vec();
    for z in &pts {
        for x in &pts {
            for y in &pts {
                assert!(check.check(&[*z], x, y).unwrap());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    for _ in 0..2000 {
        let r: Vec<ProjPoint> = (0..2).map(|_| pts[rng.gen_range(0..pts.len())]).collect();
        let (x, y) = (pts[rng.gen_range(0..pts.len())], pts[rng.gen_range(0..pts.len())]);
        assert!(check.check(&r, &x, &y).unwrap());
    }
}
