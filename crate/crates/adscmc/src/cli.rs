//! Command-line driver: options, subcommands and exit status.
//!
//! Options come from flags and optionally a JSON file (`--config`); flags win.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::algebra::GroupElement;
use crate::bryant::{assemble_mu, assemble_nu, integrate_frame, FrameCurve, NullLeg};
use crate::error::{Error, Result};
use crate::export::{export_surface, project_surface, read_json, write_json, Format, SurfaceFile};
use crate::gallery::gallery;
use crate::gauss::{
    frame_gauss_coordinates, gauss_conformality_check, generalized_gauss, holomorphicity_check, hyperbolic_gauss,
    FramesRef, GaussMapGrid, Holomorphicity,
};
use crate::geometry::{geometry_report, AmbientSpec, Check, GeometryReport, Orientation};
use crate::lax::{gmc_residual, integrate_lax, GmcData, LaxFrames, LaxOptions};
use crate::minimal::{integrate_minimal, WeierstrassData};
use crate::surface::{Action, Domain, Pole, Sign, Surface, SurfaceGridH31};
use crate::tol::Tolerances;

/// Square used when neither the command nor the options fix a domain.
pub const DEFAULT_RANGE: (f64, f64) = (-0.75, 0.75);
pub const DEFAULT_NODES: usize = 51;

#[derive(Parser, Debug)]
#[command(name = "adscmc", version, about = "Timelike cmc surfaces in anti-de Sitter 3-space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Subcommand, Debug)]
pub enum CliCommand {
    /// Minimal surface in Minkowski 3-space from (q, f, r, g)
    Minimal(Options),
    /// H = ±1 surface from a pair of null curves built on (q, f, r, g)
    Cmc1(Options),
    /// Surface from (omega, H, Q, R) through the Lax system
    Lax(Options),
    /// Geometry report on a surface read from JSON
    Verify(Options),
    /// Gauss maps and, on Lax frames, the holomorphicity classification
    Gauss(Options),
    /// Stereographic image of a surface read from JSON
    Project(Options),
    /// Build and verify a named example
    Gallery {
        name: String,
        #[command(flatten)]
        options: Options,
    },
}

#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    /// JSON file holding any of these options
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// q(u)
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// f(u), default 1
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// r(v)
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// g(v), default 1
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// omega(u, v)
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// Constant mean curvature H
    #[arg(long = "H", allow_hyphen_values = true)]
    #[serde(rename = "H")]
    pub mean_curvature: Option<f64>,
    /// Q(u)
    #[arg(long = "Q", allow_hyphen_values = true)]
    #[serde(rename = "Q")]
    pub hopf_q: Option<String>,
    /// R(v)
    #[arg(long = "R", allow_hyphen_values = true)]
    #[serde(rename = "R")]
    pub hopf_r: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_name = "LO,HI")]
    pub u_range: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_name = "LO,HI")]
    pub v_range: Option<Vec<f64>>,
    /// Nodes per side
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub nv: Option<usize>,
    #[arg(long, value_enum)]
    pub action: Option<Action>,
    #[arg(long, value_enum)]
    pub orientation: Option<Orientation>,
    /// Projection pole: plus divides by 1 + x0, minus by 1 - x0
    #[arg(long, value_enum)]
    pub pole: Option<Pole>,
    /// Output files; the format follows the extension (obj, json, csv)
    #[arg(long)]
    pub out: Vec<PathBuf>,
    /// Surface JSON for verify, gauss and project
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Tolerance override, repeatable
    #[arg(long, value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// Full tolerance set; config file only
    #[arg(skip)]
    pub tolerances: Option<Tolerances>,
}

impl Options {
    /// `self` over `base`: flags win, tolerance overrides apply after the file's.
    pub fn over(self, base: Options) -> Options {
        Options {
            config: self.config.or(base.config),
            q: self.q.or(base.q),
            f: self.f.or(base.f),
            r: self.r.or(base.r),
            g: self.g.or(base.g),
            omega: self.omega.or(base.omega),
            mean_curvature: self.mean_curvature.or(base.mean_curvature),
            hopf_q: self.hopf_q.or(base.hopf_q),
            hopf_r: self.hopf_r.or(base.hopf_r),
            u_range: self.u_range.or(base.u_range),
            v_range: self.v_range.or(base.v_range),
            n: self.n.or(base.n),
            nu: self.nu.or(base.nu),
            nv: self.nv.or(base.nv),
            action: self.action.or(base.action),
            orientation: self.orientation.or(base.orientation),
            pole: self.pole.or(base.pole),
            out: if self.out.is_empty() { base.out } else { self.out },
            input: self.input.or(base.input),
            tol: base.tol.into_iter().chain(self.tol).collect(),
            tolerances: self.tolerances.or(base.tolerances),
        }
    }

    pub fn tolerances(&self) -> Result<Tolerances> {
        let mut t = self.tolerances.clone().unwrap_or_default();
        for a in &self.tol {
            t.set(a)?;
        }
        Ok(t)
    }

    fn orientation(&self) -> Orientation {
        self.orientation.unwrap_or(Orientation::Positive)
    }

    fn action(&self) -> Action {
        self.action.unwrap_or(Action::Mu)
    }

    /// Domain from the options, falling back to `base` per field.
    pub fn domain(&self, base: Domain) -> Result<Domain> {
        let range = |r: &Option<Vec<f64>>, flag: &str, lo: f64, hi: f64| match r.as_deref() {
            None => Ok((lo, hi)),
            Some([a, b]) => Ok((*a, *b)),
            Some(other) => Err(Error::Usage(format!("--{flag} expects LO,HI, got {} values", other.len()))),
        };
        let u = range(&self.u_range, "u-range", base.u.lo, base.u.hi)?;
        let v = range(&self.v_range, "v-range", base.v.lo, base.v.hi)?;
        let nu = self.nu.or(self.n).unwrap_or(base.nu());
        let nv = self.nv.or(self.n).unwrap_or(base.nv());
        if nu < 5 || nv < 5 {
            return Err(Error::Usage(format!("--n/--nu/--nv must be at least 5, got {nu}x{nv}")));
        }
        Domain::new(u, v, nu, nv)
    }

    fn required<'a>(&self, value: &'a Option<String>, flag: &str) -> Result<&'a str> {
        value.as_deref().ok_or_else(|| Error::Usage(format!("--{flag} is required")))
    }

    fn weierstrass(&self) -> Result<WeierstrassData> {
        WeierstrassData::parse(
            self.required(&self.q, "q")?,
            self.f.as_deref().unwrap_or("1"),
            self.required(&self.r, "r")?,
            self.g.as_deref().unwrap_or("1"),
        )
    }

    fn gmc(&self) -> Result<GmcData> {
        let h = self.mean_curvature.ok_or_else(|| Error::Usage("--H is required".into()))?;
        GmcData::parse(self.required(&self.omega, "omega")?, h, self.required(&self.hopf_q, "Q")?, self.required(&self.hopf_r, "R")?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Minimal,
    Cmc1,
    Lax,
    Verify,
    Gauss,
    Project,
    Gallery(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub options: Options,
}

impl RunConfig {
    /// Merges the `--config` file under the flags.
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (command, flags) = match cli.command {
            CliCommand::Minimal(o) => (Command::Minimal, o),
            CliCommand::Cmc1(o) => (Command::Cmc1, o),
            CliCommand::Lax(o) => (Command::Lax, o),
            CliCommand::Verify(o) => (Command::Verify, o),
            CliCommand::Gauss(o) => (Command::Gauss, o),
            CliCommand::Project(o) => (Command::Project, o),
            CliCommand::Gallery { name, options } => (Command::Gallery(name), options),
        };
        let options = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let file: Options = serde_json::from_str(&text)
                    .map_err(|e| Error::Usage(format!("--config {}: {e}", path.display())))?;
                flags.over(file)
            }
            None => flags,
        };
        Ok(RunConfig { command, options })
    }
}

/// What a command printed, checked and wrote.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
    pub written: Vec<PathBuf>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Failed check with the largest value-to-tolerance ratio.
    pub fn worst_failure(&self) -> Option<&Check> {
        let ratio = |c: &Check| if c.value.is_nan() { f64::INFINITY } else { c.value / c.tolerance.max(f64::MIN_POSITIVE) };
        self.checks.iter().filter(|c| !c.pass).max_by(|a, b| ratio(a).total_cmp(&ratio(b)))
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// Lines, then one row per check, then the worst offender if any.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        for c in &self.checks {
            s.push_str(&format!(
                "{} {:<28} {:.3e} <= {:.3e}  at ({:.4}, {:.4})\n",
                if c.pass { "ok  " } else { "FAIL" },
                c.name,
                c.value,
                c.tolerance,
                c.at.0,
                c.at.1
            ));
        }
        for p in &self.written {
            s.push_str(&format!("wrote {}\n", p.display()));
        }
        if let Some(w) = self.worst_failure() {
            s.push_str(&format!("worst offender: {} = {:.3e} exceeds {:.3e} at ({}, {})\n", w.name, w.value, w.tolerance, w.at.0, w.at.1));
        }
        s
    }

    fn line(&mut self, l: impl Into<String>) {
        self.lines.push(l.into());
    }

    fn check(&mut self, name: &str, value: f64, tolerance: f64) {
        self.checks.push(Check { name: name.into(), value, tolerance, at: (0.0, 0.0), pass: value <= tolerance });
    }

    fn export(&mut self, surface: &Surface, report: Option<(&GeometryReport, &[Check])>, opts: &Options) -> Result<()> {
        for path in &opts.out {
            export_surface(surface, report, opts.pole.unwrap_or(Sign::Plus), Format::from_path(path)?, path)?;
            self.written.push(path.clone());
        }
        Ok(())
    }
}

fn default_domain() -> Domain {
    Domain::square(DEFAULT_RANGE.0, DEFAULT_RANGE.1, DEFAULT_NODES).expect("default domain is valid")
}

fn near_zero(d: &Domain) -> (usize, usize) {
    (d.u.nearest(0.0), d.v.nearest(0.0))
}

fn summarize(out: &mut Outcome, report: &GeometryReport) {
    let s = &report.summary;
    out.line(format!(
        "interior points {}, step {:.4e}, modal H {:.9}, min e^omega {:.4e}, umbilic fraction {:.3}",
        report.data.points.len(),
        s.step,
        s.h_mode,
        s.min_metric,
        s.umbilic_fraction
    ));
}

/// Bryant-type frames anchored at the nodes nearest the origin with identity data.
pub fn cmc1_frames(opts: &Options, domain: &Domain, tol: &Tolerances) -> Result<(FrameCurve, FrameCurve)> {
    let data = opts.weierstrass()?;
    let (i0, j0) = near_zero(domain);
    let second = match opts.action() {
        Action::Mu => NullLeg::AntiholomorphicMu,
        Action::Nu => NullLeg::AntiholomorphicNu,
    };
    let id = GroupElement::IDENTITY;
    let f1 = integrate_frame(NullLeg::Holomorphic, &data.q, &data.f, &domain.u, domain.u.at(i0), &id, tol)?;
    let f2 = integrate_frame(second, &data.r, &data.g, &domain.v, domain.v.at(j0), &id, tol)?;
    Ok((f1, f2))
}

fn assemble(f1: &FrameCurve, f2: &FrameCurve, action: Action, tol: &Tolerances) -> Result<SurfaceGridH31> {
    match action {
        Action::Mu => assemble_mu(f1, f2, tol),
        Action::Nu => assemble_nu(f1, f2, tol),
    }
}

fn lax_frames(opts: &Options, domain: &Domain, tol: &Tolerances, out: &mut Outcome) -> Result<LaxFrames> {
    let data = opts.gmc()?;
    let (res, i, j) = gmc_residual(&data, domain, tol)?.max();
    let (u, v) = domain.point(i, j);
    out.line(format!("compatibility residual {res:.3e} at ({u:.4}, {v:.4})"));
    let lax = LaxOptions { anchor: near_zero(domain), ..LaxOptions::default() };
    integrate_lax(&data, opts.action(), domain, &lax, tol)
}

/// H target for a constant mean curvature ±1 surface: the sign of the modal value.
fn unit_target(report: &GeometryReport) -> f64 {
    if report.summary.h_mode < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn read_surface(opts: &Options) -> Result<(Surface, Option<Action>)> {
    let path = opts.input.as_deref().ok_or_else(|| Error::Usage("--input is required".into()))?;
    let file = read_json(path)?;
    Ok((file.surface()?, file.meta.assembly))
}

fn ambient_of(s: &Surface) -> AmbientSpec {
    match s {
        Surface::H31(_) => AmbientSpec::h31(),
        Surface::E31(_) => AmbientSpec::e31(),
    }
}

#[derive(Serialize)]
struct GaussFile<'a> {
    schema: u32,
    hyperbolic: [&'a GaussMapGrid; 2],
    generalized: [&'a GaussMapGrid; 2],
    frame: Option<[&'a GaussMapGrid; 2]>,
    plus_class: Option<Holomorphicity>,
    minus_class: Option<Holomorphicity>,
}

pub fn run_command(cfg: &RunConfig) -> Result<Outcome> {
    let opts = &cfg.options;
    let tol = opts.tolerances()?;
    let orientation = opts.orientation();
    let mut out = Outcome::default();
    match &cfg.command {
        Command::Minimal => {
            let domain = opts.domain(default_domain())?;
            let psi = integrate_minimal(&opts.weierstrass()?, &domain, domain.point(near_zero(&domain).0, near_zero(&domain).1), &tol)?;
            let report = geometry_report(&psi, &AmbientSpec::e31(), orientation, &tol)?;
            summarize(&mut out, &report);
            out.checks = report.surface_checks(&psi, Some(0.0), &tol);
            let checks = out.checks.clone();
            out.export(&Surface::E31(psi), Some((&report, &checks)), opts)?;
        }
        Command::Cmc1 => {
            let domain = opts.domain(default_domain())?;
            let (f1, f2) = cmc1_frames(opts, &domain, &tol)?;
            out.line(format!("frame drift {:.3e} / {:.3e}", f1.max_drift(), f2.max_drift()));
            let s = assemble(&f1, &f2, opts.action(), &tol)?;
            out.line(format!("{} assembly, {} masked points", opts.action().name(), s.mask.iter().filter(|m| **m).count()));
            let report = geometry_report(&s, &AmbientSpec::h31(), orientation, &tol)?;
            summarize(&mut out, &report);
            out.checks = report.surface_checks(&s, Some(unit_target(&report)), &tol);
            let checks = out.checks.clone();
            out.export(&Surface::H31(s), Some((&report, &checks)), opts)?;
        }
        Command::Lax => {
            let domain = opts.domain(default_domain())?;
            let frames = lax_frames(opts, &domain, &tol, &mut out)?;
            let s = frames.assemble();
            let report = geometry_report(&s, &AmbientSpec::h31(), orientation, &tol)?;
            summarize(&mut out, &report);
            let h = opts.mean_curvature.unwrap_or(1.0) * orientation.sign();
            out.checks = report.surface_checks(&s, Some(h), &tol);
            out.check("path independence", frames.path_defect, tol.path_tol);
            let checks = out.checks.clone();
            out.export(&Surface::H31(s), Some((&report, &checks)), opts)?;
        }
        Command::Verify => {
            let (surface, _) = read_surface(opts)?;
            let report = geometry_report(surface.as_ref(), &ambient_of(&surface), orientation, &tol)?;
            summarize(&mut out, &report);
            out.checks = report.surface_checks(surface.as_ref(), opts.mean_curvature, &tol);
            let checks = out.checks.clone();
            out.export(&surface, Some((&report, &checks)), opts)?;
        }
        Command::Gauss => run_gauss(opts, &tol, &mut out)?,
        Command::Project => {
            let (surface, _) = read_surface(opts)?;
            let Surface::H31(s) = surface else {
                return Err(Error::Usage("project needs an anti-de Sitter surface".into()));
            };
            let pole = opts.pole.unwrap_or(Sign::Plus);
            let image = project_surface(&s, pole)?;
            // points on the pole's own half land inside the de Sitter 2-sphere
            let mut worst = f64::NEG_INFINITY;
            for (k, y) in image.points.iter().enumerate() {
                if !s.mask[k] && pole.value() * s.points[k].to_vec().x0 > 0.0 {
                    worst = worst.max(-y.x1 * y.x1 + y.x2 * y.x2 + y.x3 * y.x3);
                }
            }
            out.line(format!("projected {} points", image.points.len()));
            if worst.is_finite() {
                out.checks.push(Check { name: "image inside unit sphere".into(), value: worst, tolerance: 1.0, at: (0.0, 0.0), pass: worst < 1.0 });
            }
            for path in &opts.out {
                match Format::from_path(path)? {
                    Format::Csv => return Err(Error::Format("project writes obj or json".into())),
                    Format::Obj => export_surface(&Surface::E31(image.clone()), None, pole, Format::Obj, path)?,
                    Format::Json => write_file(path, &SurfaceFile::new(&Surface::E31(image.clone()), None))?,
                }
                out.written.push(path.clone());
            }
        }
        Command::Gallery(name) => {
            let entry = gallery(name)?;
            let domain = opts.domain(entry.domain)?;
            let surface = entry.build(&domain, &tol)?;
            out.line(format!("{}: {}", entry.name, entry.notes));
            let (report, checks) = entry.verify(&surface, orientation, &tol)?;
            summarize(&mut out, &report);
            out.checks = checks;
            let checks = out.checks.clone();
            out.export(&surface, Some((&report, &checks)), opts)?;
        }
    }
    Ok(out)
}

fn write_file(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut buf = Vec::new();
    write_json(&mut buf, value)?;
    std::fs::write(path, buf)?;
    Ok(())
}

fn run_gauss(opts: &Options, tol: &Tolerances, out: &mut Outcome) -> Result<()> {
    let orientation = opts.orientation();
    let mut lax = None;
    let mut bryant = None;
    let surface = if opts.input.is_some() {
        match read_surface(opts)?.0 {
            Surface::H31(s) => s,
            Surface::E31(_) => return Err(Error::Usage("gauss needs an anti-de Sitter surface".into())),
        }
    } else if opts.omega.is_some() {
        let domain = opts.domain(default_domain())?;
        let frames = lax_frames(opts, &domain, tol, out)?;
        let s = frames.assemble();
        lax = Some(frames);
        s
    } else {
        let domain = opts.domain(default_domain())?;
        let (f1, f2) = cmc1_frames(opts, &domain, tol)?;
        let s = assemble(&f1, &f2, opts.action(), tol)?;
        bryant = Some((f1, f2));
        s
    };
    let hyp = [Sign::Plus, Sign::Minus].map(|sg| hyperbolic_gauss(&surface, orientation, sg, tol));
    let (gp, gm) = generalized_gauss(&surface, tol);
    for (h, g, label) in [(&hyp[0], &gp, "plus"), (&hyp[1], &gm, "minus")] {
        out.line(format!("hyperbolic {label}: {} of {} nodes charted, spread {:.4e}", h.defined(), h.coords.len(), h.spread()));
        let (d, n) = h.max_difference(g);
        out.line(format!("generalized {label}: compared on {n} nodes"));
        out.check(&format!("generalized gauss {label}"), d, tol.gauss_map);
    }
    let frame = match (&lax, &bryant) {
        (Some(l), _) => Some([Sign::Plus, Sign::Minus].map(|sg| frame_gauss_coordinates(FramesRef::Lax(l), sg, tol))),
        (_, Some((f1, f2))) => Some([Sign::Plus, Sign::Minus].map(|sg| frame_gauss_coordinates(FramesRef::Bryant(f1, f2), sg, tol))),
        _ => None,
    };
    let frame = match frame {
        Some([a, b]) => Some([a?, b?]),
        None => None,
    };
    if let (Some(l), Some(fr)) = (&lax, &frame) {
        // frame entries chart the same null lines as phi +- N on Lax frames
        for (h, f, label) in [(&hyp[0], &fr[0], "plus"), (&hyp[1], &fr[1], "minus")] {
            out.check(&format!("frame gauss {label}"), h.max_difference(f).0, tol.gauss_map);
        }
        if l.action == Action::Mu {
            let rep = holomorphicity_check(l, tol)?;
            let name = |c: Option<Holomorphicity>| c.map_or("mixed", Holomorphicity::name);
            out.line(format!("plus Gauss map: {}; minus Gauss map: {}", name(rep.plus), name(rep.minus)));
            out.check("holomorphicity identities", rep.max_residual, tol.identity);
        }
    }
    let report = geometry_report(&surface, &AmbientSpec::h31(), orientation, tol)?;
    if (report.summary.h_mode - 1.0).abs() <= tol.mean_curvature {
        let worst = gauss_conformality_check(&surface, orientation, Sign::Plus).iter().map(|p| p.residual).fold(0.0, f64::max);
        out.check("gauss map conformality", worst, tol.gauss_conformality);
    }
    let (plus_class, minus_class) = match &lax {
        Some(l) if l.action == Action::Mu => {
            let rep = holomorphicity_check(l, tol)?;
            (rep.plus, rep.minus)
        }
        _ => (None, None),
    };
    let file = GaussFile {
        schema: crate::export::SCHEMA,
        hyperbolic: [&hyp[0], &hyp[1]],
        generalized: [&gp, &gm],
        frame: frame.as_ref().map(|[a, b]| [a, b]),
        plus_class,
        minus_class,
    };
    for path in &opts.out {
        if Format::from_path(path)? != Format::Json {
            return Err(Error::Format("gauss writes json".into()));
        }
        write_file(path, &file)?;
        out.written.push(path.clone());
    }
    Ok(())
}

/// Parses `args`, runs, prints, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| run_command(&cfg));
    match result {
        Ok(outcome) => {
            print!("{}", outcome.render());
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
