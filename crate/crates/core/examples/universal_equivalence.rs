use cubic_compose::corpus;
use cubic_compose::equivalence::{ch_axioms_check, meet, quotient, u2, u3, universal};
use cubic_compose::field::FieldSpec;
use cubic_compose::geometry::collinearity;
use cubic_compose::words::action_permutation;

fn main() -> cubic_compose::Result<()> {
    let f = FieldSpec::new(2, 2)?;
    let p = collinearity(&corpus::diagonal_a_surface(&f))?;

    let (u, trace) = universal(&p);
    println!("{} points, stage class counts {:?}", p.len(), trace.class_counts());
    let (a, b) = (u3(&p), u2(&p)?);
    println!("U: {} classes, U3: {}, U2: {}", u.class_count(), a.class_count(), b.class_count());
    assert_eq!(meet(&a, &b)?, u);

    let q = quotient(&p, &u)?;
    println!("quotient passes the CH axioms: {}", ch_axioms_check(&q).passed());
    // t_x t_y acts trivially on the quotient exactly when x ~ y.
    let id: Vec<usize> = (0..q.len()).collect();
    for y in 0..p.len() {
        assert_eq!(action_permutation(&[0, y], &q) == id, u.same(0, y));
    }
    Ok(())
}
