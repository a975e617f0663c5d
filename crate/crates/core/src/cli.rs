//! The `chromstat` command line. Lives in the library so that it can be
//! driven in-process with captured output.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::coloring::ClassSpec;
use crate::exact::parse_rational;
use crate::experiments::{self, ExperimentError, FamilySpec, Format, GraphFamily, RegimeThresholds};
use crate::moments::full_report;
use crate::oracle::DEFAULT_BUDGET;
use crate::randgraph::{ModelTemplate, VerdictThresholds};

/// Exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Exact and simulated moments of monochromatic edge counts under uniform
/// random colorings with prescribed class sizes.
#[derive(Parser)]
#[command(name = "chromstat", version)]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true, env = "CHROMSTAT_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Exact moment report for one graph and composition.
    Moments {
        /// Edge-list file, or complete:n, star:n, path:n, cycle:n, circulant:n:d, threshold:IDID
        #[arg(long)]
        graph: String,
        /// c1,c2,…  |  balanced:s  |  ratios:3/4,1/4
        #[arg(long)]
        classes: String,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check every closed form against exhaustive enumeration on small graphs.
    OracleVerify {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Seeded random graphs added to the corpus.
        #[arg(long, default_value_t = 20)]
        random_graphs: usize,
    },
    /// Monte Carlo mean and variance of M against the exact values.
    Simulate {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        classes: String,
        #[arg(long, default_value_t = experiments::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regime classification along an n-grid.
    Regime {
        /// complete | star | path | cycle | circulant:d=4 | a random model template such as gnp:p=4/n
        #[arg(long)]
        family: String,
        /// n1,n2,…  or  start..end*factor
        #[arg(long)]
        grid: String,
        #[arg(long)]
        classes: String,
        /// 0 runs the exact formulas only.
        #[arg(long, default_value_t = experiments::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Rows as JSON or CSV (by extension unless --format is given); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutFormat>,
        #[arg(long, default_value_t = 0.2)]
        zeta_threshold: f64,
        #[arg(long, default_value_t = -0.1)]
        zeta_exponent: f64,
        #[arg(long, default_value_t = 1e-3)]
        imbalance_threshold: f64,
        #[arg(long, default_value = "1/2")]
        theta: String,
    },
    /// E[Σ₂]/[E m]² criterion and edge-count concentration for a random model.
    Rdcheck {
        /// gnp:p=… | config:law=… | geo:r=… | cl:w=FILE | starlike
        #[arg(long)]
        model: String,
        #[arg(long)]
        grid: String,
        /// 0 evaluates the closed forms only.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = -0.5)]
        decay_exponent: f64,
        #[arg(long, default_value_t = 0.05)]
        small: f64,
        #[arg(long, default_value_t = 0.1)]
        flat_exponent: f64,
    },
}

enum Failure {
    Input(String),
    Validation(String),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn to_json<T: serde::Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

fn output(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => Ok(experiments::write_file(p, text)?),
        None => write!(out, "{text}").map_err(input),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Moments { graph, classes, json, csv } => {
            let g = experiments::parse_graph(&graph)?;
            let c = classes.parse::<ClassSpec>().map_err(input)?.resolve(g.n()).map_err(input)?;
            let report = full_report(&g, &c).map_err(input)?;
            if let Some(p) = &csv {
                experiments::write_file(p, &experiments::moment_report_csv(&report))?;
            }
            if json.is_some() || csv.is_none() {
                output(out, json.as_deref(), &to_json(&report))?;
            }
        }
        Command::OracleVerify { max_n, budget, random_graphs } => {
            let report = experiments::oracle_verify(max_n, random_graphs, budget)?;
            output(out, None, &to_json(&report))?;
            if !report.passed() {
                return Err(Failure::Validation(format!(
                    "{} of {} checks disagree with enumeration",
                    report.mismatches.len(),
                    report.checks
                )));
            }
        }
        Command::Simulate { graph, classes, trials, seed, out: path } => {
            let g = experiments::parse_graph(&graph)?;
            let c = classes.parse::<ClassSpec>().map_err(input)?.resolve(g.n()).map_err(input)?;
            let cmp = experiments::run_comparison(&g, &c, trials, seed)?;
            output(out, path.as_deref(), &to_json(&cmp))?;
        }
        Command::Regime {
            family,
            grid,
            classes,
            trials,
            seed,
            out: path,
            format,
            zeta_threshold,
            zeta_exponent,
            imbalance_threshold,
            theta,
        } => {
            let theta = parse_rational(&theta)
                .ok_or_else(|| Failure::Input(format!("bad theta {theta:?}")))?;
            let spec = FamilySpec {
                family: GraphFamily::parse(&family)?,
                classes: classes.parse().map_err(input)?,
                grid: experiments::parse_grid(&grid)?,
            };
            let th = RegimeThresholds {
                zeta_sq: zeta_threshold,
                zeta_exponent,
                imbalance_sq: imbalance_threshold,
                theta,
            };
            let report = experiments::run_regime(&spec, trials, seed, &th)?;
            match &path {
                Some(path) => {
                    let fmt = match format {
                        Some(OutFormat::Csv) => Format::Csv,
                        Some(OutFormat::Json) => Format::Json,
                        None => Format::from_path(path),
                    };
                    experiments::emit(&report.rows, fmt, path)?;
                    let mut meta = serde_json::to_value(&report).expect("serializable");
                    if let Some(obj) = meta.as_object_mut() {
                        obj.remove("rows");
                    }
                    output(out, None, &to_json(&meta))?;
                }
                None => match format {
                    Some(OutFormat::Csv) => output(out, None, &experiments::rows_to_csv(&report.rows))?,
                    _ => output(out, None, &to_json(&report))?,
                },
            }
        }
        Command::Rdcheck {
            model,
            grid,
            trials,
            seed,
            out: path,
            decay_exponent,
            small,
            flat_exponent,
        } => {
            let template = ModelTemplate::parse(&model).map_err(input)?;
            let grid = experiments::parse_grid(&grid)?;
            let th = VerdictThresholds {
                decay_exponent,
                small,
                flat_exponent,
            };
            let check = experiments::rdcheck(&template, &grid, trials, seed, &th)?;
            output(out, path.as_deref(), &to_json(&check))?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    // Buffered so the command can run inside a worker pool.
    let mut buf = Vec::new();
    let mut result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(cli.command, &mut buf)),
            Err(e) => Err(input(e)),
        },
        None => execute(cli.command, &mut buf),
    };
    if let Err(e) = out.write_all(&buf).and_then(|()| out.flush()) {
        result = result.and(Err(input(e)));
    }
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Validation(msg)) => {
            let _ = writeln!(err, "chromstat: {msg}");
            EXIT_VALIDATION
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "chromstat: {msg}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::CSV_HEADER;
    use crate::graph::{Family, Graph};

    struct Run {
        code: u8,
        stdout: String,
        stderr: String,
    }

    fn chromstat(args: &[&str]) -> Run {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("chromstat").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        Run {
            code,
            stdout: String::from_utf8(out).unwrap(),
            stderr: String::from_utf8(err).unwrap(),
        }
    }

    fn json(r: &Run) -> serde_json::Value {
        assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
        serde_json::from_str(&r.stdout).expect("json on stdout")
    }

    fn path_str(p: &Path) -> &str {
        p.to_str().unwrap()
    }

    #[test]
    fn moments_from_edge_list_file() {
        let dir = tempfile::tempdir().unwrap();
        let (graph, js, cs) = (dir.path().join("p4.txt"), dir.path().join("r.json"), dir.path().join("r.csv"));
        Family::Path(4).generate().unwrap().save_edge_list(&graph).unwrap();
        let r = chromstat(&[
            "moments", "--graph", path_str(&graph), "--classes", "2,2", "--json", path_str(&js), "--csv", path_str(&cs),
        ]);
        assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
        let report: serde_json::Value = serde_json::from_slice(&std::fs::read(js).unwrap()).unwrap();
        assert_eq!(report["var_common"]["num"], "2");
        assert_eq!(report["var_common"]["den"], "3");
        assert_eq!(report["mean_M"]["num"], "1");
        let csv = std::fs::read_to_string(cs).unwrap();
        assert!(csv.starts_with("n,m,sigma2,classes,mean_M"));
        assert!(csv.lines().nth(1).unwrap().starts_with("4,3,10,2;2,1,2,2/3"));
    }

    #[test]
    fn edge_list_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let g = Graph::new(6, [(5, 0), (1, 2), (3, 1), (4, 5)]).unwrap();
        g.save_edge_list(&path).unwrap();
        assert_eq!(Graph::load_edge_list(&path).unwrap(), g);
        let r = chromstat(&["moments", "--graph", path_str(&path), "--classes", "balanced:2"]);
        assert_eq!(json(&r)["m"], 4);
    }

    #[test]
    fn input_errors_exit_with_2() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.txt");
        std::fs::write(&bad, "3 2\n0 1\n1 1\n").unwrap();
        let r = chromstat(&["moments", "--graph", path_str(&bad), "--classes", "2,1"]);
        assert_eq!(r.code, EXIT_INPUT);
        assert!(r.stderr.contains("line 3"), "{}", r.stderr);

        for args in [
            &["moments", "--graph", "path:4", "--classes", "2,1"][..],
            &["moments", "--graph", "wheel:5", "--classes", "2,3"],
            &["regime", "--family", "star", "--grid", "40,20", "--classes", "balanced:2", "--seed", "1"],
            &["regime", "--family", "star", "--grid", "40", "--classes", "balanced:2", "--seed", "1", "--theta", "x"],
            &["rdcheck", "--model", "gnp:p=2", "--grid", "10,20", "--seed", "1"],
            &["simulate", "--graph", "path:4", "--classes", "2,2", "--trials", "10", "--seed", "1"],
            &["simulate", "--graph", "path:4", "--classes", "2,2"],
            &["bogus"],
        ] {
            let r = chromstat(args);
            assert_eq!(r.code, EXIT_INPUT, "{args:?}");
            assert!(!r.stderr.is_empty());
        }
    }

    #[test]
    fn help_goes_to_stdout() {
        let r = chromstat(&["--help"]);
        assert_eq!(r.code, EXIT_OK);
        assert!(r.stdout.contains("oracle-verify"));
    }

    #[test]
    fn oracle_verify_succeeds() {
        let r = chromstat(&["oracle-verify", "--max-n", "6", "--random-graphs", "5"]);
        let report = json(&r);
        assert_eq!(report["mismatches"].as_array().unwrap().len(), 0);
        assert_eq!(report["graphs"], 3 * 3 + 3 + 1 + 5);
    }

    #[test]
    fn balanced_star_simulation_is_constant() {
        let r = chromstat(&["simulate", "--graph", "star:8", "--classes", "4,4", "--trials", "10000", "--seed", "3"]);
        let cmp = json(&r);
        assert_eq!(cmp["min_m"], 3);
        assert_eq!(cmp["max_m"], 3);
        assert_eq!(cmp["mean_pass"], true);
        assert_eq!(cmp["var_pass"], true);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let args = ["simulate", "--graph", "cycle:12", "--classes", "8,4", "--trials", "5000", "--seed", "1"];
        let one = chromstat(&[&["--threads", "1"][..], &args].concat());
        let three = chromstat(&[&["--threads", "3"][..], &args].concat());
        assert_eq!(one.code, EXIT_OK);
        assert_eq!(one.stdout, three.stdout);
    }

    #[test]
    fn regime_csv_has_documented_header() {
        let dir = tempfile::tempdir().unwrap();
        let rows = dir.path().join("rows.csv");
        let r = chromstat(&[
            "regime", "--family", "cycle", "--grid", "50..400*2", "--classes", "ratios:3/4,1/4",
            "--trials", "0", "--seed", "1", "--out", path_str(&rows),
        ]);
        let meta = json(&r);
        assert_eq!(meta["predicted_regime"], "concentration");
        assert!(meta.get("rows").is_none());
        let csv = std::fs::read_to_string(rows).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(lines.count(), 4);
    }

    #[test]
    fn regime_json_rows_parse_back() {
        let dir = tempfile::tempdir().unwrap();
        let rows = dir.path().join("rows.json");
        let r = chromstat(&[
            "regime", "--family", "star", "--grid", "40,400", "--classes", "ratios:3/4,1/4",
            "--trials", "500", "--seed", "2", "--out", path_str(&rows),
        ]);
        assert_eq!(json(&r)["predicted_regime"], "anti_concentration");
        let parsed = experiments::rows_from_json(&std::fs::read_to_string(rows).unwrap()).unwrap();
        assert_eq!(parsed.len(), 2);
        assert!(parsed.iter().all(|row| row.empirical_var.is_some()));
    }

    #[test]
    fn rdcheck_reports_both_modes() {
        let r = json(&chromstat(&["rdcheck", "--model", "starlike", "--grid", "100,200,400", "--trials", "20", "--seed", "4"]));
        assert_eq!(r["closed_form"]["verdict"], "anti_concentrates");
        assert_eq!(r["monte_carlo"]["points"].as_array().unwrap().len(), 3);
        assert!(r["assumption"]["points"][0]["var_m_over_mean_sq"].as_f64().unwrap() > 0.0);

        let r = json(&chromstat(&["rdcheck", "--model", "config:law=3:1", "--grid", "100,200", "--trials", "0", "--seed", "4"]));
        assert_eq!(r["closed_form"]["points"][0]["exact_ratio"]["num"], "1");
        assert_eq!(r["closed_form"]["points"][0]["exact_ratio"]["den"], "25");
        assert!(r["monte_carlo"].is_null());
    }
}
