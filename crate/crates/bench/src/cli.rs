use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcm_bem::solver::born_energy;
use pcm_bem::surface::load_pqr_file;
use pcm_bem::{ChargeSet, DielectricConfig, SolveMode, Vec3};

use crate::config::{ChargeSource, Geometry, MeshFiles, MethodSet, ReferenceMode, StudyConfig};
use crate::csv::{convergence_csv, line_csv, preamble};
use crate::study::{linspace, run_convergence_study, run_line_potential_study, run_work_precision_study};
use crate::{BenchError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "pcmbem",
    version,
    about = "Mesh-convergence and work-precision studies for PCM boundary-element solvers",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Random charges in a sphere: energy error against the Kirkwood series.
    SphereConv(StudyArgs),
    /// Sphere study with flop counts and the panel/point crossover.
    SphereWorkprec(StudyArgs),
    /// Reaction potential of one charge along the z axis.
    LinePotential(StudyArgs),
    /// Central unit charge: convergence to the Born energy.
    Born(StudyArgs),
    /// Molecular meshes with a Richardson reference.
    ResidueConv(StudyArgs),
    /// Molecular work-precision study.
    ResidueWorkprec(StudyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Pan,
    Srf,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolveArg {
    Lu,
    Gmres,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReferenceArg {
    Kirkwood,
    Richardson,
}

/// Inclusive `lo:hi` range of icosphere levels.
#[derive(Debug, Clone, Copy)]
struct Levels(u32, u32);

impl FromStr for Levels {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (lo, hi) = s.split_once(':').unwrap_or((s, s));
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad level `{t}`: {e}"));
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if lo > hi {
            return Err(format!("empty level range {lo}:{hi}"));
        }
        Ok(Levels(lo, hi))
    }
}

#[derive(Debug, Args)]
struct StudyArgs {
    /// Sphere radius, Å.
    #[arg(long = "R", default_value_t = 6.0)]
    sphere_radius: f64,
    /// Same as --R.
    #[arg(long)]
    radius: Option<f64>,
    /// Charge grid spacing, Å.
    #[arg(long = "h", default_value_t = 1.0)]
    spacing: f64,
    /// Number of charges.
    #[arg(long = "Q", default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Icosphere levels, `lo:hi`.
    #[arg(long, default_value = "1:4")]
    levels: Levels,
    /// Solute permittivity.
    #[arg(long, default_value_t = 4.0)]
    eps_in: f64,
    /// Solvent permittivity.
    #[arg(long, default_value_t = 80.0)]
    eps_out: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
    #[arg(long, value_enum, default_value_t = SolveArg::Lu)]
    solve: SolveArg,
    /// GMRES relative tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Reference energy; sphere studies default to kirkwood, residue studies
    /// to richardson.
    #[arg(long, value_enum)]
    reference: Option<ReferenceArg>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// MSMS vertex file, one per mesh density.
    #[arg(long)]
    vert: Vec<PathBuf>,
    /// MSMS face file, one per mesh density.
    #[arg(long)]
    face: Vec<PathBuf>,
    /// PQR charges, once or once per mesh.
    #[arg(long)]
    pqr: Vec<PathBuf>,
    /// Kirkwood multipole order.
    #[arg(long, default_value_t = 25)]
    order_nmax: usize,
    /// Omit the timestamp header line.
    #[arg(long)]
    no_timestamp: bool,
    /// Line study: charge position on the z axis, Å.
    #[arg(long, default_value_t = 4.5)]
    charge_z: f64,
    /// Line study: icosphere level.
    #[arg(long, default_value_t = 3)]
    level: u32,
    /// Line study: number of samples on [−R, R].
    #[arg(long, default_value_t = 121)]
    samples: usize,
}

impl StudyArgs {
    fn radius(&self) -> f64 {
        self.radius.unwrap_or(self.sphere_radius)
    }

    fn dielectric(&self) -> Result<DielectricConfig> {
        Ok(DielectricConfig::new(self.eps_out, self.eps_in)?)
    }

    fn solve_mode(&self) -> SolveMode {
        match self.solve {
            SolveArg::Lu => SolveMode::Lu,
            SolveArg::Gmres => SolveMode::gmres(self.tol),
        }
    }

    fn method_set(&self) -> MethodSet {
        match self.method {
            MethodArg::Pan => MethodSet::Panel,
            MethodArg::Srf => MethodSet::Point,
            MethodArg::Both => MethodSet::Both,
        }
    }

    fn settings(&self) -> Vec<(&'static str, String)> {
        let solve = match self.solve {
            SolveArg::Lu => "lu".to_string(),
            SolveArg::Gmres => format!("gmres:{:e}", self.tol),
        };
        vec![
            ("eps_in", self.eps_in.to_string()),
            ("eps_out", self.eps_out.to_string()),
            ("solve", solve),
            ("seed", self.seed.to_string()),
        ]
    }

    fn study_config(&self, default_reference: ReferenceMode) -> Result<StudyConfig> {
        if self.vert.len() != self.face.len() {
            return Err(BenchError::Config(format!(
                "{} --vert files but {} --face files",
                self.vert.len(),
                self.face.len()
            )));
        }
        let reference = match self.reference {
            Some(ReferenceArg::Kirkwood) => ReferenceMode::Kirkwood,
            Some(ReferenceArg::Richardson) => ReferenceMode::Richardson,
            None => default_reference,
        };
        let mut cfg = StudyConfig::sphere(self.radius(), (self.levels.0..=self.levels.1).collect());
        if !self.vert.is_empty() {
            cfg.geometry = Geometry::Meshes(
                self.vert
                    .iter()
                    .zip(&self.face)
                    .map(|(v, f)| MeshFiles {
                        vert: v.clone(),
                        face: f.clone(),
                    })
                    .collect(),
            );
        }
        cfg.charges = match self.pqr.as_slice() {
            [] => ChargeSource::Grid {
                radius: self.radius(),
                spacing: self.spacing,
                count: self.count,
            },
            [first, rest @ ..] => {
                if !rest.is_empty() && rest.len() + 1 != self.vert.len() {
                    return Err(BenchError::Config(format!(
                        "give --pqr once or once per mesh, got {} for {} meshes",
                        rest.len() + 1,
                        self.vert.len()
                    )));
                }
                let charges = load_pqr_file(first)?;
                for other in rest {
                    if load_pqr_file(other)? != charges {
                        return Err(BenchError::Config(format!(
                            "{} and {} hold different charges",
                            first.display(),
                            other.display()
                        )));
                    }
                }
                ChargeSource::Pqr(first.clone())
            }
        };
        cfg.dielectric = self.dielectric()?;
        cfg.methods = self.method_set();
        cfg.solve = self.solve_mode();
        cfg.reference = reference;
        cfg.series_order = self.order_nmax;
        cfg.output = self.out.clone();
        cfg.seed = self.seed;
        Ok(cfg)
    }

    fn timestamp(&self) -> Option<u64> {
        if self.no_timestamp {
            return None;
        }
        SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
    }
}

fn run(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let started = Instant::now();
    let (name, args) = match &command {
        Command::SphereConv(a) => ("sphere-conv", a),
        Command::SphereWorkprec(a) => ("sphere-workprec", a),
        Command::LinePotential(a) => ("line-potential", a),
        Command::Born(a) => ("born", a),
        Command::ResidueConv(a) => ("residue-conv", a),
        Command::ResidueWorkprec(a) => ("residue-workprec", a),
    };
    let mut settings = args.settings();
    let body = match &command {
        Command::SphereConv(a) | Command::SphereWorkprec(a) => {
            let cfg = a.study_config(ReferenceMode::Kirkwood)?;
            if let Geometry::Icosphere { radius, .. } = cfg.geometry {
                settings.extend([
                    ("R", radius.to_string()),
                    ("h", a.spacing.to_string()),
                    ("Q", a.count.to_string()),
                    ("levels", format!("{}:{}", a.levels.0, a.levels.1)),
                    ("nmax", a.order_nmax.to_string()),
                ]);
            }
            let report = match command {
                Command::SphereConv(_) => run_convergence_study(&cfg)?,
                _ => run_work_precision_study(&cfg)?,
            };
            convergence_csv(&report)
        }
        Command::ResidueConv(a) | Command::ResidueWorkprec(a) => {
            if a.vert.len() < 2 {
                return Err(BenchError::Config(
                    "residue studies need at least two --vert/--face pairs".into(),
                ));
            }
            if a.pqr.is_empty() {
                return Err(BenchError::Config("residue studies need --pqr".into()));
            }
            let cfg = a.study_config(ReferenceMode::Richardson)?;
            settings.push(("meshes", a.vert.len().to_string()));
            let report = match command {
                Command::ResidueConv(_) => run_convergence_study(&cfg)?,
                _ => run_work_precision_study(&cfg)?,
            };
            convergence_csv(&report)
        }
        Command::Born(a) => {
            let mut cfg = a.study_config(ReferenceMode::Kirkwood)?;
            if !matches!(cfg.geometry, Geometry::Icosphere { .. }) || !a.pqr.is_empty() {
                return Err(BenchError::Config(
                    "born uses an icosphere and a central charge only".into(),
                ));
            }
            cfg.charges = ChargeSource::Explicit(ChargeSet::single(Vec3::ZERO, 1.0));
            settings.extend([
                ("R", a.radius().to_string()),
                ("levels", format!("{}:{}", a.levels.0, a.levels.1)),
            ]);
            let report = run_convergence_study(&cfg)?;
            let mut body = convergence_csv(&report);
            let born = born_energy(1.0, a.radius(), &cfg.dielectric);
            body.push_str(&format!("converged_to={born:.4} (analytic)\n"));
            body
        }
        Command::LinePotential(a) => {
            let r = a.radius();
            let zs = linspace(-r, r, a.samples);
            settings.extend([
                ("R", r.to_string()),
                ("charge_z", a.charge_z.to_string()),
                ("level", a.level.to_string()),
                ("nmax", a.order_nmax.to_string()),
            ]);
            let table = run_line_potential_study(
                r,
                a.charge_z,
                a.level,
                &a.dielectric()?,
                &zs,
                a.order_nmax,
                a.solve_mode(),
            )?;
            line_csv(&table)
        }
    };
    let text = preamble(name, &settings, args.timestamp()) + &body;
    match &args.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    let _ = writeln!(stderr, "# {name} elapsed_s={:.3}", started.elapsed().as_secs_f64());
    Ok(())
}

fn error_line(kind: &str, message: &str) -> String {
    let flat = message.trim().replace('\n', " ").replace('"', "'");
    format!("error: kind={kind} message=\"{flat}\"")
}

/// Parse `argv` (including the program name) and run one study.
///
/// Returns the process exit status: 0 on success, 2 for usage errors, 1 for
/// failures while running. Every failure ends with one
/// `error: kind=... message="..."` line on `stderr`.
pub fn cli_main<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    0
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(stderr, "{rendered}");
                    let _ = writeln!(stderr, "{}", error_line("usage", "no subcommand given"));
                    2
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    let first = rendered.lines().next().unwrap_or("invalid arguments");
                    let _ = writeln!(stderr, "{}", error_line("usage", first.trim_start_matches("error: ")));
                    2
                }
            };
        }
    };
    match run(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{}", error_line(e.kind(), &e.to_string()));
            1
        }
    }
}

#[cfg(test)]
mod tests;
