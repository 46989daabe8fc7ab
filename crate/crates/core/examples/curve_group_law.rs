use cubic_compose::field::FieldSpec;
use cubic_compose::geometry::{CompositionTable, CubicForm, PlaneCubic};

fn main() -> cubic_compose::Result<()> {
    let f = FieldSpec::new(7, 1)?;
    // X^3 - Y^2 Z + 3 Z^3
    let terms = [
        ([3, 0, 0, 0], f.one()),
        ([0, 2, 1, 0], f.from_int(-1)),
        ([0, 0, 3, 0], f.from_int(3)),
    ];
    let curve = PlaneCubic::new(CubicForm::from_terms(&f, 2, &terms)?)?;
    assert!(curve.is_smooth());

    let table = CompositionTable::new(&curve)?;
    let pts = table.points();
    println!("{} rational points", table.len());
    for e in 0..table.len() {
        assert!(table.check_group(e));
    }
    println!("every point is the neutral element of an abelian group law");

    let (o, x, y) = (&pts[0], &pts[1], &pts[2]);
    println!("with O = {o:?}: {x:?} + {y:?} = {:?}", curve.curve_add(o, x, y)?);
    println!("{x:?} o {x:?} = {:?}", curve.curve_third(x, x)?.point());
    Ok(())
}
