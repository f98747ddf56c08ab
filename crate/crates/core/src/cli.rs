//! Command-line front end.
//!
//! Precedence: flags, then the TOML config file, then defaults. The effective
//! configuration is echoed into every JSON report.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::compactify::{build_compactification, profile_csv, CompactKind};
use crate::error::{Error, Result};
use crate::escobar::hemisphere_check;
use crate::geometry::{curvature_report, linspace, make_warped_metric, volume_data, WarpSpec, WarpedMetric};
use crate::scattering::{adapted_profile, scattering_multiplier_with, SolveOptions};
use crate::specfun::sphere_constants;
use crate::verify::{verify_all, SCHEMA_VERSION};
use crate::yamabe::{minimize_rayleigh, theorem_chain_report, MinimizeOptions};

pub const OUT_DIR_ENV: &str = "FRACYAM_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fracyam", version, about = "Fractional Yamabe constants, scattering on hyperbolic space, and volume-ratio checks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cmd {
    /// Sphere constants d_γ, |Sⁿ|, Q and Y.
    Constants,
    /// Scattering multipliers for k = 0..kmax against the Gamma ratio.
    Multiplier,
    /// Adapted profile and its Type I compactification.
    Adapted,
    /// Area and ball volume ratios and curvature of a warped metric.
    Volume,
    /// Lower bound against the volume ratios.
    Chain,
    /// Minimize the Rayleigh quotient over zonal trials.
    Rayleigh,
    /// Hemisphere compactification and Escobar constants.
    Escobar,
    /// Run the full acceptance suite.
    VerifyAll,
}

impl Cmd {
    fn name(self) -> &'static str {
        match self {
            Cmd::Constants => "constants",
            Cmd::Multiplier => "multiplier",
            Cmd::Adapted => "adapted",
            Cmd::Volume => "volume",
            Cmd::Chain => "chain",
            Cmd::Rayleigh => "rayleigh",
            Cmd::Escobar => "escobar",
            Cmd::VerifyAll => "verify-all",
        }
    }
}

#[derive(Debug, Default, Args)]
struct Flags {
    /// TOML file with any of the configuration keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    gamma: Option<f64>,
    #[arg(long, global = true)]
    kmax: Option<usize>,
    #[arg(long, global = true)]
    tmax: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    restarts: Option<usize>,
    #[arg(long, global = true)]
    max_iters: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// hyperbolic | flat | perturbed:EPS:A | deficit:DELTA
    #[arg(long, global = true)]
    warp: Option<String>,
    #[arg(long, global = true)]
    grid_start: Option<f64>,
    #[arg(long, global = true)]
    grid_end: Option<f64>,
    #[arg(long, global = true)]
    grid_count: Option<usize>,
    /// Output directory; defaults to $FRACYAM_OUT_DIR, then ".".
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Print the JSON report to standard output.
    #[arg(long, global = true)]
    json: bool,
}

/// Keys accepted in the config file.
#[derive(Debug, Default, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub gamma: Option<f64>,
    pub kmax: Option<usize>,
    pub tmax: Option<f64>,
    pub rel_tol: Option<f64>,
    pub restarts: Option<usize>,
    pub max_iters: Option<usize>,
    pub seed: Option<u64>,
    pub warp: Option<WarpSpec>,
    pub grid_start: Option<f64>,
    pub grid_end: Option<f64>,
    pub grid_count: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

/// Effective configuration of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Cmd,
    pub n: usize,
    pub gamma: f64,
    pub kmax: usize,
    pub tmax: f64,
    pub rel_tol: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub warp: WarpSpec,
    pub grid_start: f64,
    pub grid_end: f64,
    pub grid_count: usize,
    #[serde(skip)]
    pub out_dir: PathBuf,
}

fn default_kmax(cmd: Cmd) -> usize {
    match cmd {
        Cmd::Rayleigh => 16,
        _ => 8,
    }
}

pub fn parse_warp(s: &str) -> Result<WarpSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> Result<f64> {
        parts
            .get(i)
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| Error::Config(format!("cannot parse warp '{s}'")))
    };
    match (parts[0], parts.len()) {
        ("hyperbolic", 1) => Ok(WarpSpec::Hyperbolic),
        ("flat", 1) => Ok(WarpSpec::Flat),
        ("perturbed", 3) => Ok(WarpSpec::Perturbed {
            epsilon: num(1)?,
            a: num(2)?,
        }),
        ("deficit", 2) => Ok(WarpSpec::Deficit { delta: num(1)? }),
        _ => Err(Error::Config(format!(
            "unknown warp '{s}' (expected hyperbolic, flat, perturbed:EPS:A or deficit:DELTA)"
        ))),
    }
}

fn resolve(cmd: Cmd, f: Flags, env_out: Option<PathBuf>) -> Result<(RunConfig, bool)> {
    let file = match &f.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read config {}: {e}", p.display())))?;
            toml::from_str::<FileConfig>(&text).map_err(|e| Error::Config(format!("config {}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    let warp = match f.warp {
        Some(w) => parse_warp(&w)?,
        None => file.warp.unwrap_or(WarpSpec::Hyperbolic),
    };
    let cfg = RunConfig {
        command: cmd,
        n: f.n.or(file.n).unwrap_or(3),
        gamma: f.gamma.or(file.gamma).unwrap_or(0.5),
        kmax: f.kmax.or(file.kmax).unwrap_or(default_kmax(cmd)),
        tmax: f.tmax.or(file.tmax).unwrap_or(30.0),
        rel_tol: f.rel_tol.or(file.rel_tol).unwrap_or(1e-12),
        restarts: f.restarts.or(file.restarts).unwrap_or(8),
        max_iters: f.max_iters.or(file.max_iters).unwrap_or(400),
        seed: f.seed.or(file.seed).unwrap_or(0),
        warp,
        grid_start: f.grid_start.or(file.grid_start).unwrap_or(0.1),
        grid_end: f.grid_end.or(file.grid_end).unwrap_or(20.0),
        grid_count: f.grid_count.or(file.grid_count).unwrap_or(200),
        out_dir: f.out_dir.or(file.out_dir).or(env_out).unwrap_or_else(|| PathBuf::from(".")),
    };
    if cfg.n < 2 {
        return Err(Error::Config("--n must be at least 2".into()));
    }
    if !(cfg.grid_start > 0.0 && cfg.grid_end > cfg.grid_start && cfg.grid_count >= 3) {
        return Err(Error::Config("grid needs 0 < start < end and at least 3 points".into()));
    }
    Ok((cfg, f.json))
}

impl RunConfig {
    fn grid(&self) -> Vec<f64> {
        linspace(self.grid_start, self.grid_end, self.grid_count)
    }

    fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            t_max: self.tmax,
            rel_tol: self.rel_tol,
            ..SolveOptions::default()
        }
    }

    fn stem(&self) -> String {
        match self.command {
            Cmd::Escobar | Cmd::Volume => format!("{}_n{}", self.command.name(), self.n),
            _ => format!("{}_n{}_g{}", self.command.name(), self.n, self.gamma),
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    config: &'a RunConfig,
    pass: Option<bool>,
    report: T,
}

struct Output {
    json: String,
    files: Vec<(String, String)>,
    pass: Option<bool>,
    summary: String,
}

fn envelope<T: Serialize>(cfg: &RunConfig, pass: Option<bool>, report: T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope {
        schema_version: SCHEMA_VERSION,
        config: cfg,
        pass,
        report,
    })?;
    s.push('\n');
    Ok(s)
}

fn execute(cfg: &RunConfig) -> Result<Output> {
    let stem = cfg.stem();
    match cfg.command {
        Cmd::Constants => {
            let c = sphere_constants(cfg.n, cfg.gamma)?;
            Ok(Output {
                json: envelope(cfg, None, c)?,
                files: vec![],
                pass: None,
                summary: format!(
                    "n = {}, γ = {}: d_γ = {:.16e}, |Sⁿ| = {:.16e}, Q = {:.16e}, Y = {:.16e}",
                    c.n, c.gamma, c.d_gamma, c.sphere_volume, c.q_curv, c.yamabe
                ),
            })
        }
        Cmd::Multiplier => {
            let opts = cfg.solve_options();
            let rows = (0..=cfg.kmax)
                .map(|k| scattering_multiplier_with(cfg.n, cfg.gamma, k, opts))
                .collect::<Result<Vec<_>>>()?;
            let mut csv = String::from("k,closed_form,numeric,error_estimate,relative_deviation\n");
            let mut worst = 0.0f64;
            for r in &rows {
                let dev = (r.value - r.closed_form).abs() / r.closed_form.abs();
                worst = worst.max(dev);
                csv.push_str(&format!("{},{:.16e},{:.16e},{:.16e},{:.16e}\n", r.k, r.closed_form, r.value, r.error, dev));
            }
            let pass = worst <= 1e-6;
            Ok(Output {
                json: envelope(cfg, Some(pass), &rows)?,
                summary: format!("{} modes, worst relative deviation {worst:.3e}", rows.len()),
                files: vec![(format!("{stem}.csv"), csv)],
                pass: Some(pass),
            })
        }
        Cmd::Adapted => {
            let p = adapted_profile(cfg.n, cfg.gamma, cfg.solve_options())?;
            let c = build_compactification(
                CompactKind::TypeI { gamma: cfg.gamma },
                &WarpedMetric::hyperbolic(cfg.n),
                cfg.solve_options(),
            )?;
            let compact = profile_csv(&c, &cfg.grid())?;
            #[derive(Serialize)]
            struct Summary {
                f0: f64,
                g0: f64,
                g0_error: f64,
                g0_expected: f64,
                f1: f64,
                f1_expected: f64,
                monotone: bool,
            }
            let s = Summary {
                f0: p.f0,
                g0: p.g0,
                g0_error: p.g0_error,
                g0_expected: p.g0_expected,
                f1: p.f1,
                f1_expected: p.f1_expected,
                monotone: p.monotone,
            };
            let pass = p.monotone && (p.g0 - p.g0_expected).abs() <= 1e-6 * p.g0_expected.abs().max(1.0);
            Ok(Output {
                summary: format!("G0/F0 = {:.12} (expected {:.12}), Φ′ < 0: {}", p.g0, p.g0_expected, p.monotone),
                json: envelope(cfg, Some(pass), s)?,
                files: vec![
                    (format!("{stem}_solution.csv"), p.solution.to_csv()),
                    (format!("{stem}_compactification.csv"), compact),
                ],
                pass: Some(pass),
            })
        }
        Cmd::Volume => {
            let m = make_warped_metric(cfg.n, cfg.warp)?;
            let grid = cfg.grid();
            let v = volume_data(&m, &grid)?;
            let curv = curvature_report(&m, &grid)?;
            // Monotonicity is only certified under the curvature gate.
            let pass = (curv.ricci_defect <= 1e-10).then_some(v.monotone);
            #[derive(Serialize)]
            struct Summary<'a> {
                monotone: bool,
                ricci_defect: f64,
                einstein_defect: f64,
                volume: &'a crate::geometry::VolumeCurve,
            }
            Ok(Output {
                summary: format!(
                    "Ric + n defect {:.3e}, ball ratio nonincreasing: {}",
                    curv.ricci_defect, v.monotone
                ),
                json: envelope(
                    cfg,
                    pass,
                    Summary {
                        monotone: v.monotone,
                        ricci_defect: curv.ricci_defect,
                        einstein_defect: curv.einstein_defect,
                        volume: &v,
                    },
                )?,
                files: vec![(format!("{stem}.csv"), v.to_csv())],
                pass,
            })
        }
        Cmd::Chain => {
            let m = make_warped_metric(cfg.n, cfg.warp)?;
            let r = theorem_chain_report(cfg.n, cfg.gamma, &m, &cfg.grid())?;
            Ok(Output {
                summary: format!("lower bound {:.16e}, pass: {:?}", r.lower_bound, r.pass),
                json: envelope(cfg, r.pass, &r)?,
                files: vec![(format!("{stem}_eta.csv"), r.eta_csv())],
                pass: r.pass,
            })
        }
        Cmd::Rayleigh => {
            let opts = MinimizeOptions {
                kmax: cfg.kmax,
                restarts: cfg.restarts,
                max_iters: cfg.max_iters,
                seed: cfg.seed,
                ..MinimizeOptions::default()
            };
            let r = minimize_rayleigh(cfg.n, cfg.gamma, &opts)?;
            let y = sphere_constants(cfg.n, cfg.gamma)?.yamabe;
            #[derive(Serialize)]
            struct Summary<'a> {
                min: f64,
                yamabe: f64,
                deviation: f64,
                iters: usize,
                restart: usize,
                converged: bool,
                log_coeffs: &'a [f64],
                coeffs: &'a [f64],
            }
            let dev = r.min - y;
            let pass = dev.abs() <= 1e-6;
            Ok(Output {
                summary: format!("min {:.16e}, Y {:.16e}, deviation {:.3e}", r.min, y, dev),
                json: envelope(
                    cfg,
                    Some(pass),
                    Summary {
                        min: r.min,
                        yamabe: y,
                        deviation: dev,
                        iters: r.iters,
                        restart: r.restart,
                        converged: r.converged,
                        log_coeffs: &r.log_coeffs,
                        coeffs: &r.argmin.coeffs,
                    },
                )?,
                files: vec![],
                pass: Some(pass),
            })
        }
        Cmd::Escobar => {
            let r = hemisphere_check(cfg.n, &cfg.grid())?;
            let pass = r.rtilde_max_dev <= 1e-8
                && r.sectional_max_dev <= 1e-8
                && r.cosh_max_dev <= 1e-10
                && r.ball_ratio_monotone
                && (r.ratio_limit - 1.0).abs() <= 1e-8;
            Ok(Output {
                summary: format!(
                    "Y_a = {:.16e}, max |R̃ − n(n+1)| = {:.3e}, max |K − 1| = {:.3e}",
                    r.ya_hemisphere, r.rtilde_max_dev, r.sectional_max_dev
                ),
                json: envelope(cfg, Some(pass), &r)?,
                files: vec![],
                pass: Some(pass),
            })
        }
        Cmd::VerifyAll => {
            let r = verify_all();
            let lines: Vec<String> = r.criteria.iter().map(|c| c.line()).collect();
            Ok(Output {
                summary: lines.join("\n"),
                json: envelope(cfg, Some(r.pass), &r)?,
                files: vec![],
                pass: Some(r.pass),
            })
        }
    }
}

fn write_files(cfg: &RunConfig, out: &Output) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    let mut written = Vec::new();
    let json_name = match cfg.command {
        Cmd::VerifyAll => "verify-all.json".to_string(),
        _ => format!("{}.json", cfg.stem()),
    };
    for (name, body) in std::iter::once((&json_name, &out.json)).chain(out.files.iter().map(|(a, b)| (a, b))) {
        let p = cfg.out_dir.join(name);
        std::fs::write(&p, body)?;
        written.push(p);
    }
    Ok(written)
}

/// Parse `argv`, run, write artifacts, and return the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    let env_out = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let (cfg, json) = match resolve(cli.command, cli.flags, env_out) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let out = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match write_files(&cfg, &out) {
        Ok(w) => w,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if json {
        let _ = write!(stdout, "{}", out.json);
    } else {
        let _ = writeln!(stdout, "{}", out.summary);
        for p in &written {
            let _ = writeln!(stdout, "wrote {}", display(p));
        }
    }
    match out.pass {
        Some(false) => EXIT_FAILED,
        _ => EXIT_OK,
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warp_parsing() {
        assert_eq!(parse_warp("hyperbolic").unwrap(), WarpSpec::Hyperbolic);
        assert_eq!(parse_warp("deficit:0.25").unwrap(), WarpSpec::Deficit { delta: 0.25 });
        assert_eq!(
            parse_warp("perturbed:0:3").unwrap(),
            WarpSpec::Perturbed { epsilon: 0.0, a: 3.0 }
        );
        assert!(parse_warp("perturbed:0").is_err());
        assert!(parse_warp("sphere").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "n = 4\ngamma = 0.25\nseed = 7\nwarp = { kind = \"deficit\", delta = 0.2 }\n").unwrap();
        let flags = Flags {
            config: Some(p),
            gamma: Some(0.75),
            ..Flags::default()
        };
        let (cfg, _) = resolve(Cmd::Rayleigh, flags, None).unwrap();
        assert_eq!((cfg.n, cfg.gamma, cfg.seed, cfg.kmax), (4, 0.75, 7, 16));
        assert_eq!(cfg.warp, WarpSpec::Deficit { delta: 0.2 });
    }

    #[test]
    fn unknown_config_key_is_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, "dimension = 3\n").unwrap();
        let flags = Flags {
            config: Some(p),
            ..Flags::default()
        };
        assert!(matches!(resolve(Cmd::Constants, flags, None), Err(Error::Config(_))));
    }

    #[test]
    fn bad_flag_exit_code() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["fracyam", "constants", "--bogus"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(run(["fracyam"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(run(["fracyam", "--help"], &mut o, &mut e), EXIT_OK);
    }
}
