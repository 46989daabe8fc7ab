use cubic_compose::corpus;
use cubic_compose::cubic::AbstractCubic;
use cubic_compose::field::FieldSpec;
use cubic_compose::geometry::collinearity;
use cubic_compose::words::{self, DEFAULT_BUDGET};

fn main() -> cubic_compose::Result<()> {
    let f = FieldSpec::new(2, 1)?;
    let p = collinearity(&corpus::fermat_curve(&f))?;

    // (t_x t_y t_z)^2 = 1 for a collinear triple.
    let nf = words::normal_form(&[0, 1, 2, 0, 1, 2], &p, DEFAULT_BUDGET);
    println!("nf(t0 t1 t2 t0 t1 t2) = {:?}", nf.word);
    println!("t0 t1 t2 = t2 t1 t0: {}", words::words_equal(&[0, 1, 2], &[2, 1, 0], &p, DEFAULT_BUDGET)?);

    // Two points with no common triple: the commutator is already minimal.
    let free = AbstractCubic::from_triples(2, [])?;
    let w = [0, 1, 0, 1];
    println!("ord_0(t0 t1 t0 t1) = {}", words::ord(&w, &free, 0, DEFAULT_BUDGET)?);
    println!("delta = {:?}", words::delta(&w, &free, DEFAULT_BUDGET)?);
    println!("psi = {:?}", words::psi(&w, &free, DEFAULT_BUDGET)?.support);

    let tight = words::normal_form(&[0, 1, 2, 0, 2, 1, 0, 2], &p, 1);
    println!("budget 1 exhausted: {}", tight.budget_hit);
    Ok(())
}
