//! Drive the library from a TOML description, as the binary does, then
//! repeat the run from its manifest and compare the outputs.

use std::fs;

use anderson_levels::io::{parse_config, rerun, run, MANIFEST_NAME};

const CONFIG: &str = r#"
experiment = "weak-coupling"
notes = "example run"

[model]
d = 2
E = 0.5

[law]
kind = "gaussian"
sigma = 1.0

[test_function]
kind = "bump"
half_width = 2

[weak_coupling]
etas = [0.1, 0.03, 0.01]
exponent = 0.3333333333333333

[seeds]
master = 3
count = 4
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = parse_config(CONFIG).map_err(|e| e.0.join("\n"))?;
    let base = std::env::temp_dir().join("anderson-levels-example");
    let (first, second) = (base.join("first"), base.join("second"));
    let manifest = run(&config, &first)?;
    println!(
        "{}: {} rows, hash {}",
        manifest.experiment, manifest.rows, manifest.config_hash
    );
    let again = rerun(&first.join(MANIFEST_NAME), &second)?;
    for o in &again.outputs {
        let same = fs::read(first.join(&o.name))? == fs::read(second.join(&o.name))?;
        println!(
            "{} {} {}",
            o.name,
            &o.sha256[..12],
            if same { "identical" } else { "DIFFERS" }
        );
    }
    println!("outputs under {}", base.display());
    Ok(())
}
