use cubic_compose::corpus;
use cubic_compose::field::FieldSpec;
use cubic_compose::geometry::collinearity;

fn main() -> cubic_compose::Result<()> {
    let f = FieldSpec::new(2, 1)?;
    for form in [corpus::fermat_curve(&f), corpus::fermat_surface(&f)] {
        let cubic = collinearity(&form)?;
        println!("{} points, {} collinear triples", cubic.len(), cubic.triple_count());
        for (i, x) in cubic.labels().unwrap().iter().enumerate() {
            println!("  {i}: {x:?}  {i} o {i} = {:?}", cubic.compose(i, i));
        }
        // Lines inside the surface make some compositions multivalued.
        println!("  line pairs: {}", cubic.line_pairs().count());
        println!("  lenient axioms hold: {}", cubic.validate(false).is_valid());
    }
    Ok(())
}
