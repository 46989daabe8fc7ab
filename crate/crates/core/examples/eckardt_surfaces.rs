use cubic_compose::field::FieldSpec;
use cubic_compose::report::{self, Command, EnumMode, RunConfig, SurfaceFilter};

fn main() -> cubic_compose::Result<()> {
    // Diagonal surfaces over F_4 with nine rational points, all Eckardt.
    let cfg = RunConfig {
        field: Some(FieldSpec::new(2, 2)?),
        ..RunConfig::new(Command::EnumerateSurfaces {
            mode: EnumMode::Diagonal,
            filter: SurfaceFilter {
                point_count: Some(9),
                all_eckardt: Some(true),
                line_count: None,
            },
            limit: 3,
        })
    };
    let r = report::run(&cfg)?;
    for s in r.results["listed"].as_array().unwrap() {
        println!(
            "{} points, {} Eckardt, {} lines, {} universal classes",
            s["points"], s["eckardt"], s["lines"], s["universal_classes"]
        );
    }
    println!("config hash {}", r.config_hash);
    Ok(())
}
