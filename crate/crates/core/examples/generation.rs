use std::collections::BTreeSet;

use cubic_compose::corpus;
use cubic_compose::field::FieldSpec;
use cubic_compose::generation::{claim_341_check, closure, generation_index, ClosureConfig, Rule};
use cubic_compose::geometry::collinearity;

fn main() -> cubic_compose::Result<()> {
    let f = FieldSpec::new(2, 1)?;
    let p = collinearity(&corpus::fermat_surface(&f))?;
    let seed = BTreeSet::from([0, 1]);

    for rule in ["std", "distinct", "a:0", "a:inf"] {
        let r = closure(&p, &seed, &ClosureConfig::new(rule.parse::<Rule>()?))?;
        println!("{rule:>8}: reached {:?} in {} rounds", r.reached, r.rounds);
    }
    println!("generation index: {:?}", generation_index(&p, 3, 3)?);
    println!("points vs quotient generation: {:?}", claim_341_check(&p, &seed)?);
    Ok(())
}
