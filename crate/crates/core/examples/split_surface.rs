use cubic_compose::field::FieldSpec;
use cubic_compose::split::{BaseConfig, SplitSurface};

fn main() -> cubic_compose::Result<()> {
    let f = FieldSpec::new(7, 1)?;
    let base = BaseConfig::search(&f)?;
    println!("base points {:?}", base.points);
    let s = SplitSurface::build(base)?;
    println!("surface equation with {} terms", s.surface().poly().terms().count());
    println!("|V| = {}, off exceptional lines: {}", s.surface().points().len(), s.complement().len());
    println!("rational lines: {}", s.surface().lines().len());

    let x = s.complement()[0];
    let r = s.theorem_53_check(&x)?;
    println!("x o_(C,p) x over planes through x reaches {} of {} points", r.covered, s.complement().len());
    for (y, why) in r.missing.iter().take(3) {
        println!("  missed {y:?}: {why:?}");
    }
    println!("x alone generates everything: {}", s.single_point_closure(&x)?.generated_all);

    let (seed, c) = s.search_generating_seed(6)?.expect("some seed generates");
    println!("distinct-only generation from {seed:?} in {} rounds", c.rounds);
    println!("U3 classes: {}", s.u3_partition()?.class_count());
    println!("sampled identities: {:?}", s.sample_elimination(50, 1));
    Ok(())
}
