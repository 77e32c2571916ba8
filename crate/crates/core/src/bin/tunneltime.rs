use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tunneltime::cli::{exit_code, run, Command, EXIT_CONFIG};
use tunneltime::Error;

#[derive(Parser)]
#[command(name = "tunneltime", version, about = "Tunnelling-time sweeps, wavepacket runs and figure data")]
struct Args {
    /// times, evolve, hartman, reshape, optical or bohm
    command: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override one config entry, e.g. `--set d=10`
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Exit with status 3 when any result is flagged low-confidence
    #[arg(long)]
    strict: bool,
}

fn main() -> ExitCode {
    ExitCode::from(run_cli(std::env::args_os()))
}

fn run_cli<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 };
        }
    };
    let result = args
        .command
        .parse::<Command>()
        .and_then(|c| {
            let text = std::fs::read_to_string(&args.config)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", args.config.display())))?;
            run(c, &text, &args.set, &args.out)
        });
    match &result {
        Ok(o) => {
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            for w in &o.warnings {
                eprintln!("warning: {w}");
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    exit_code(&result, args.strict) as u8
}

#[cfg(test)]
mod tests {
    use super::run_cli;
    use std::path::{Path, PathBuf};

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("tunneltime-cli-{}-{name}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    fn run(dir: &Path, command: &str, config: &str, extra: &[&str]) -> u8 {
        let cfg = dir.join("run.cfg");
        std::fs::write(&cfg, config).unwrap();
        let out = dir.join("out");
        let mut argv = vec!["tunneltime", command, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
        argv.extend_from_slice(extra);
        run_cli(argv)
    }

    /// Header line and data rows of a written table.
    fn table(dir: &Path, name: &str) -> (Vec<String>, Vec<Vec<String>>) {
        let text = std::fs::read_to_string(dir.join("out").join(format!("{name}.csv"))).unwrap();
        let mut lines = text.lines().filter(|l| !l.starts_with('#'));
        let header = lines.next().unwrap().split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        (header, rows)
    }

    fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
        let i = header.iter().position(|h| h == name).unwrap();
        rows.iter().map(|r| r[i].parse().unwrap()).collect()
    }

    #[test]
    fn config_errors_exit_2() {
        let dir = scratch("errors");
        assert_eq!(run(&dir, "times", "colour = blue\n", &[]), 2);
        assert_eq!(run(&dir, "times", "v0 = -3\n", &[]), 2);
        assert_eq!(run(&dir, "times", "v0 10\n", &[]), 2);
        assert_eq!(run(&dir, "times", "", &["--set", "bogus=1"]), 2);
        assert_eq!(run(&dir, "teleport", "", &[]), 2);
        assert_eq!(run_cli(["tunneltime", "times", "--config", "/nonexistent/tunneltime.cfg"]), 2);
        assert_eq!(run_cli(["tunneltime", "times"]), 2);
    }

    #[test]
    fn single_point_gives_one_row() {
        let dir = scratch("single");
        assert_eq!(run(&dir, "times", "v0 = 10\nd = 5\ne = 5\n", &[]), 0);
        let (header, rows) = table(&dir, "times");
        assert_eq!(rows.len(), 1);
        assert_eq!(header.len(), 18);
        assert_eq!(header[1], "k");
        let t = column(&header, &rows, "T")[0];
        assert!((t / 6.507899767409726e-3 - 1.0).abs() < 1e-9);
        let text = std::fs::read_to_string(dir.join("out/times.csv")).unwrap();
        assert!(text.starts_with("# tunneltime "));
        assert!(text.contains("# config v0 = 1e1"));
        assert!(text.contains("# constant hbar_ev_s = 6.582119569e-16"));
    }

    #[test]
    fn output_is_deterministic() {
        let dir = scratch("determinism");
        let cfg = "d = 5, 10\ne_min = 1\ne_max = 9\ne_steps = 9\n";
        run(&dir, "times", cfg, &[]);
        let a = std::fs::read(dir.join("out/times.csv")).unwrap();
        run(&dir, "times", cfg, &[]);
        let b = std::fs::read(dir.join("out/times.csv")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_across_barrier_top_stays_finite() {
        let dir = scratch("top");
        // 10 eV lies exactly on the barrier top
        let code = run(&dir, "times", "v0 = 10\nd = 5\ne_min = 8\ne_max = 12\ne_steps = 5\n", &["--strict"]);
        assert_eq!(code, 0);
        let (_, rows) = table(&dir, "times");
        assert_eq!(rows.len(), 5);
        for r in &rows {
            for c in r {
                assert!(c.parse::<f64>().unwrap().is_finite(), "{c}");
            }
        }
    }

    #[test]
    fn hartman_columns() {
        let dir = scratch("hartman");
        assert_eq!(run(&dir, "hartman", "d = 13, 20, 30\nflux = false\n", &[]), 0);
        let (h, rows) = table(&dir, "hartman");
        let d = column(&h, &rows, "d_A");
        let phase = column(&h, &rows, "dtau_phase_T_s");
        let sat = column(&h, &rows, "tau_saturation_s");
        let bl = column(&h, &rows, "tau_BL_T_s");
        for i in 0..3 {
            assert!((phase[i] / sat[i] - 1.0).abs() < 0.01);
            assert!((bl[i] / d[i] - bl[0] / d[0]).abs() < 1e-12 * bl[0] / d[0]);
        }
    }

    #[test]
    fn strict_flags_low_confidence() {
        let dir = scratch("strict");
        let cfg = "d = 10\nnodes = 129\nfine_dt = 5e-17\n";
        assert_eq!(run(&dir, "hartman", cfg, &[]), 0);
        assert_eq!(run(&dir, "hartman", cfg, &["--strict"]), 3);
        let (h, rows) = table(&dir, "hartman");
        assert_eq!(rows[0][h.iter().position(|c| c == "flux_low_confidence").unwrap()], "true");
    }

    #[test]
    fn optical_routes_agree() {
        let dir = scratch("optical");
        assert_eq!(run(&dir, "optical", "ratio_steps = 11\nratio_min = 0.55\n", &["--strict"]), 0);
        let (h, rows) = table(&dir, "optical_dispersion");
        for r in column(&h, &rows, "relative_difference") {
            assert!(r <= 1e-10);
        }
        let ev = h.iter().position(|c| c == "evanescent").unwrap();
        assert_eq!(rows.first().unwrap()[ev], "true");
        assert_eq!(rows.last().unwrap()[ev], "false");
        let (h, rows) = table(&dir, "optical_gaps");
        for r in column(&h, &rows, "relative_to_first") {
            assert!(r.abs() < 0.05);
        }
        assert!(dir.join("out/optical_gaps.svg").exists());
    }

    #[test]
    fn evolve_with_potential_file() {
        let dir = scratch("evolve");
        let pot = dir.join("double.pot");
        std::fs::write(&pot, "# two thin walls\nsegment = 0, 1, 10\nsegment = 1, 3, 0\nsegment = 3, 4, 10\n").unwrap();
        let cfg = format!("potential = {}\nnodes = 129\nx_points = 20\nfine_dt = 5e-17\nsvg = false\n", pot.display());
        assert_eq!(run(&dir, "evolve", &cfg, &[]), 0);
        let (h, rows) = table(&dir, "evolve");
        assert_eq!(rows.len(), 20);
        let x = column(&h, &rows, "x_A");
        assert_eq!((x[0], x[19]), (0.0, 4.0));
        assert!(h.contains(&"minus_low_confidence".to_string()));
        assert!(!dir.join("out/evolve_pen.svg").exists());
        assert_eq!(run(&dir, "evolve", &format!("{cfg}d = 5\n"), &[]), 2);
    }
}
