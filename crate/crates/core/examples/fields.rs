use cubic_compose::field::FieldSpec;
use cubic_compose::geometry::enumerate_proj_points;

fn main() -> cubic_compose::Result<()> {
    let f = FieldSpec::new(2, 3)?;
    println!("F_{} with modulus {:?}", f.q(), f.modulus());

    let a = f.generator();
    println!("a = {:?}, a^7 = {:?}", f.coeffs(a), f.coeffs(f.pow(a, 7)));
    println!("1/a = {:?}", f.coeffs(f.inv(a)?));

    // F_8 sits inside F_64.
    let big = FieldSpec::new(2, 6)?;
    let emb = f.embedding_into(&big)?;
    assert_eq!(emb.preimage(emb.apply(a)), Some(a));

    for dim in [2, 3] {
        println!("|P^{dim}(F_8)| = {}", enumerate_proj_points(dim, &f).len());
    }
    Ok(())
}
