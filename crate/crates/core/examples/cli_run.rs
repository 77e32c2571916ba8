//! Runs the `times` command in-process on one of the sample configs and
//! prints the files it wrote.
use tunneltime::cli::{run, Command};

fn main() -> tunneltime::Result<()> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/times.cfg"))?;
    let out = std::env::temp_dir().join("tunneltime-example");
    let o = run(Command::Times, &text, &["d=5, 10".to_string()], &out)?;
    for f in o.files {
        println!("wrote {}", f.display());
    }
    for w in o.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
