//! The four subcommands: verify, geometry, symmetry, export.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use guichard_core::families::conserved_quantities;
use guichard_core::geometry::{
    self, coordinate_curvatures, cyclicity_check, level_surface_grad_norm, mean_curvature_at,
    phi_ode_residuals, sample_level_surface, Cyclicity, PhiForm,
};
use guichard_core::symmetry::{
    all_zero, group_action_test, parse_ansatz, verify_generator, GroupAction, VectorFieldAnsatz,
};
use guichard_core::{
    first_order_residuals, second_order_residuals, Error as CoreError, GuichardNet, NetField,
};

use crate::config::{parse_spec, ConfigError, FamilySpec};
use crate::report::{fmt_float, write_residual_report, JsonWriter};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Gnuplot,
}

pub struct Ctx {
    pub grid: [usize; 3],
    pub tols: BTreeMap<String, f64>,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Ctx {
    fn tol(&self, name: &str, default: f64) -> f64 {
        self.tols.get(name).copied().unwrap_or(default)
    }
}

#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Io(String),
    Core(CoreError),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Usage(_) | CmdError::Io(_) => 1,
            CmdError::Core(CoreError::Singularity { .. }) => 3,
            CmdError::Core(_) => 1,
        }
    }
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Usage(m) | CmdError::Io(m) => write!(f, "{m}"),
            CmdError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CmdError {
    fn from(e: CoreError) -> Self {
        CmdError::Core(e)
    }
}

impl From<ConfigError> for CmdError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Core(c) => CmdError::Core(c),
            other => CmdError::Usage(other.to_string()),
        }
    }
}

fn load_spec(path: &Path) -> Result<FamilySpec, CmdError> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_spec(&src)?)
}

fn emit(ctx: &Ctx, content: &str) -> Result<(), CmdError> {
    match &ctx.out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_sibling(ctx: &Ctx, suffix: &str, content: &str) -> Result<(), CmdError> {
    if let Some(path) = &ctx.out {
        let mut name = path.as_os_str().to_owned();
        name.push(suffix);
        let sib = PathBuf::from(name);
        return std::fs::write(&sib, content)
            .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", sib.display())));
    }
    Ok(())
}

/// verify: first- and second-order residuals over the grid; exit 0 on pass,
/// 2 on a residual failure.
pub fn cmd_verify(spec_path: &Path, ctx: &Ctx) -> Result<i32, CmdError> {
    let spec = load_spec(spec_path)?;
    let net = spec.build()?;
    let grid = net.domain().grid(ctx.grid, 0.05);
    let tol1 = ctx.tol("first_order", 1e-8);
    let tol2 = ctx.tol("second_order", 1e-6);
    let first = first_order_residuals(&net, &grid, tol1)?;
    let second = second_order_residuals(&net, &grid, tol2)?;
    let pass = first.pass() && second.pass();

    let mut w = JsonWriter::new();
    w.begin_object();
    w.key("command").string("verify");
    w.key("seed").uint(ctx.seed);
    w.key("grid").begin_array();
    for n in ctx.grid {
        w.int(n as i64);
    }
    w.end_array();
    w.key("first_order");
    write_residual_report(&mut w, &first);
    w.key("second_order");
    write_residual_report(&mut w, &second);
    w.key("pass").boolean(pass);
    w.end_object();
    let mut out = w.finish();
    out.push('\n');
    emit(ctx, &out)?;
    Ok(if pass { 0 } else { 2 })
}

struct GeometryData {
    rows: Vec<GeometryRow>,
    levels: Vec<LevelRow>,
    cyclicity: Option<geometry::CyclicityReport>,
    phi_ode: Option<guichard_core::ResidualReport>,
}

struct GeometryRow {
    p: [f64; 3],
    l: [f64; 3],
    k: [f64; 3],
    grad_norm: Option<f64>,
    mean_curv: Option<f64>,
}

struct LevelRow {
    xi0: f64,
    grad_norm: f64,
    mean_curv: f64,
    grad_variance: f64,
    h_variance: f64,
}

fn geometry_data(net: &GuichardNet, ctx: &Ctx) -> Result<GeometryData, CmdError> {
    let grid = net.domain().grid(ctx.grid, 0.05);
    let has_alpha = net.xi_invariant().is_some();
    let mut rows = Vec::with_capacity(grid.len());
    for &p in &grid {
        let l = net.l_at(p)?;
        let k = coordinate_curvatures(net, p)?;
        let (grad_norm, mean_curv) = if has_alpha {
            (
                Some(level_surface_grad_norm(net, p)?),
                Some(mean_curvature_at(net, p)?),
            )
        } else {
            (None, None)
        };
        rows.push(GeometryRow {
            p,
            l,
            k,
            grad_norm,
            mean_curv,
        });
    }

    let mut levels = Vec::new();
    if let Some(alpha) = net.xi_invariant() {
        let corners = net.domain().corners();
        let xi_of = |p: [f64; 3]| alpha[0] * p[0] + alpha[1] * p[1] + alpha[2] * p[2];
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for c in corners {
            lo = lo.min(xi_of(c));
            hi = hi.max(xi_of(c));
        }
        let radius = 0.05
            * (0..3)
                .map(|i| net.domain().extent(i))
                .fold(f64::INFINITY, f64::min);
        for m in 0..5 {
            let xi0 = lo + (hi - lo) * (0.3 + 0.1 * m as f64);
            let pts = sample_level_surface(net, xi0, 50, radius, ctx.seed.wrapping_add(m))?;
            let mut ws = Vec::with_capacity(pts.len());
            let mut hs = Vec::with_capacity(pts.len());
            for &p in &pts {
                ws.push(level_surface_grad_norm(net, p)?);
                let gamma = geometry::christoffel(net, p)?;
                let l = net.l_at(p)?;
                let mut sum = 0.0;
                for i in 0..3 {
                    for k in 0..3 {
                        sum += gamma[k][i][i] * alpha[k] / (l[i] * l[i]);
                    }
                }
                hs.push(sum / ws.last().unwrap());
            }
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            let var = |v: &[f64]| {
                let m = mean(v);
                v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / v.len() as f64
            };
            levels.push(LevelRow {
                xi0,
                grad_norm: mean(&ws),
                mean_curv: mean(&hs),
                grad_variance: var(&ws),
                h_variance: var(&hs),
            });
        }
    }

    let cyclicity = cyclicity_check(net, &grid, PhiForm::CosType).ok();
    let phi_ode = if let Some(t) = net.translation() {
        let (lo, hi) = t.xi_range();
        let xis: Vec<f64> = (0..32)
            .map(|n| lo + (hi - lo) * (n as f64 + 0.5) / 32.0)
            .collect();
        phi_ode_residuals(net, &xis, ctx.tol("phi_ode", 1e-7)).ok()
    } else {
        None
    };

    Ok(GeometryData {
        rows,
        levels,
        cyclicity,
        phi_ode,
    })
}

fn csv_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

fn cyclicity_text(c: Cyclicity) -> &'static str {
    match c {
        Cyclicity::NonCyclic => "non-cyclic",
        Cyclicity::CyclicCompatible => "cyclic-compatible",
        Cyclicity::Indeterminate => "indeterminate",
    }
}

/// geometry: per-point curvature table, per-level-set parallelism table,
/// cyclicity classification, and (for the elliptic family) φ-ODE residuals.
pub fn cmd_geometry(spec_path: &Path, ctx: &Ctx) -> Result<i32, CmdError> {
    let spec = load_spec(spec_path)?;
    let net = spec.build()?;
    let data = geometry_data(&net, ctx)?;

    match ctx.format {
        Format::Csv => {
            let mut csv = String::from("x1,x2,x3,l1,l2,l3,K1,K2,K3,sum,grad_norm,H\n");
            for r in &data.rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    fmt_float(r.p[0]),
                    fmt_float(r.p[1]),
                    fmt_float(r.p[2]),
                    fmt_float(r.l[0]),
                    fmt_float(r.l[1]),
                    fmt_float(r.l[2]),
                    fmt_float(r.k[0]),
                    fmt_float(r.k[1]),
                    fmt_float(r.k[2]),
                    fmt_float(r.k[0] + r.k[1] + r.k[2]),
                    csv_opt(r.grad_norm),
                    csv_opt(r.mean_curv),
                ));
            }
            emit(ctx, &csv)?;
            let mut lv = String::from("xi0,grad_norm,H,grad_variance,H_variance\n");
            for l in &data.levels {
                lv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_float(l.xi0),
                    fmt_float(l.grad_norm),
                    fmt_float(l.mean_curv),
                    fmt_float(l.grad_variance),
                    fmt_float(l.h_variance),
                ));
            }
            emit_sibling(ctx, ".levels.csv", &lv)?;
            if let Some(cyc) = &data.cyclicity {
                let mut w = JsonWriter::new();
                write_cyclicity(&mut w, cyc);
                let mut s = w.finish();
                s.push('\n');
                emit_sibling(ctx, ".cyclicity.json", &s)?;
            }
        }
        Format::Json => {
            let mut w = JsonWriter::new();
            w.begin_object();
            w.key("command").string("geometry");
            w.key("seed").uint(ctx.seed);
            w.key("rows").begin_array();
            for r in &data.rows {
                w.begin_object();
                w.key("point").float_array(&r.p);
                w.key("l").float_array(&r.l);
                w.key("K").float_array(&r.k);
                w.key("sum").float(r.k[0] + r.k[1] + r.k[2]);
                if let (Some(g), Some(h)) = (r.grad_norm, r.mean_curv) {
                    w.key("grad_norm").float(g);
                    w.key("H").float(h);
                }
                w.end_object();
            }
            w.end_array();
            w.key("levels").begin_array();
            for l in &data.levels {
                w.begin_object();
                w.key("xi0").float(l.xi0);
                w.key("grad_norm").float(l.grad_norm);
                w.key("H").float(l.mean_curv);
                w.key("grad_variance").float(l.grad_variance);
                w.key("H_variance").float(l.h_variance);
                w.end_object();
            }
            w.end_array();
            if let Some(cyc) = &data.cyclicity {
                w.key("cyclicity");
                write_cyclicity(&mut w, cyc);
            }
            if let Some(ode) = &data.phi_ode {
                w.key("phi_ode");
                write_residual_report(&mut w, ode);
            }
            w.end_object();
            let mut s = w.finish();
            s.push('\n');
            emit(ctx, &s)?;
        }
        Format::Gnuplot => {
            // Profile along the invariant direction.
            let mut s = String::from("# xi l1 l2 l3 K1 K2 K3\n");
            if let Some(alpha) = net.xi_invariant() {
                let corners = net.domain().corners();
                let xi_of = |p: [f64; 3]| alpha[0] * p[0] + alpha[1] * p[1] + alpha[2] * p[2];
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for c in corners {
                    lo = lo.min(xi_of(c));
                    hi = hi.max(xi_of(c));
                }
                let n = ctx.grid[0].max(2);
                let n2: f64 = alpha.iter().map(|a| a * a).sum();
                let center = net.domain().center();
                let xi_c = xi_of(center);
                for m in 0..n {
                    let xi = lo + (hi - lo) * (0.05 + 0.9 * m as f64 / (n - 1) as f64);
                    let p = [0, 1, 2].map(|i| center[i] + alpha[i] * (xi - xi_c) / n2);
                    let l = net.l_at(p)?;
                    let k = coordinate_curvatures(&net, p)?;
                    s.push_str(&format!(
                        "{} {} {} {} {} {} {}\n",
                        fmt_float(xi),
                        fmt_float(l[0]),
                        fmt_float(l[1]),
                        fmt_float(l[2]),
                        fmt_float(k[0]),
                        fmt_float(k[1]),
                        fmt_float(k[2]),
                    ));
                }
            } else {
                // No invariant direction: profile along the box diagonal.
                let n = ctx.grid[0].max(2);
                for m in 0..n {
                    let t = 0.05 + 0.9 * m as f64 / (n - 1) as f64;
                    let d = net.domain();
                    let p = [0, 1, 2].map(|i| d.lo[i] + t * d.extent(i));
                    let l = net.l_at(p)?;
                    let k = coordinate_curvatures(&net, p)?;
                    s.push_str(&format!(
                        "{} {} {} {} {} {} {}\n",
                        fmt_float(t),
                        fmt_float(l[0]),
                        fmt_float(l[1]),
                        fmt_float(l[2]),
                        fmt_float(k[0]),
                        fmt_float(k[1]),
                        fmt_float(k[2]),
                    ));
                }
            }
            emit(ctx, &s)?;
        }
    }
    Ok(0)
}

fn write_cyclicity(w: &mut JsonWriter, cyc: &geometry::CyclicityReport) {
    w.begin_object();
    w.key("classification")
        .string(cyclicity_text(cyc.classification));
    w.key("pairs").begin_array();
    for p in &cyc.pairs {
        w.begin_object();
        w.key("axes").begin_array();
        w.int(p.axes.0 as i64 + 1);
        w.int(p.axes.1 as i64 + 1);
        w.end_array();
        w.key("max_abs").float(p.max_abs);
        w.key("vanishes").boolean(p.vanishes);
        w.end_object();
    }
    w.end_array();
    w.end_object();
}

/// symmetry: symbolic generator check (built-in or user ansatz), plus the
/// numeric group-action test when a family spec is given.
pub fn cmd_symmetry(
    ansatz_path: Option<&Path>,
    spec_path: Option<&Path>,
    ctx: &Ctx,
) -> Result<i32, CmdError> {
    let ansatz = match ansatz_path {
        Some(path) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| CmdError::Io(format!("cannot read {}: {e}", path.display())))?;
            parse_ansatz(&src)?
        }
        None => VectorFieldAnsatz::scaling_generator(),
    };
    let checks = verify_generator(&ansatz)?;
    let generator_pass = all_zero(&checks);

    let mut action_reports = Vec::new();
    if let Some(path) = spec_path {
        let net = load_spec(path)?.build()?;
        let tol = ctx.tol("first_order", 1e-8);
        for (name, action) in [
            ("translate", GroupAction::Translate([1.0, -2.0, 0.5])),
            ("dilate_x", GroupAction::DilateX(3.0)),
            ("dilate_l", GroupAction::DilateL(2.0)),
        ] {
            let rep = group_action_test(&net, action, ctx.grid, tol)?;
            action_reports.push((name, rep));
        }
    }
    let actions_pass = action_reports.iter().all(|(_, r)| r.pass());

    let mut w = JsonWriter::new();
    w.begin_object();
    w.key("command").string("symmetry");
    w.key("seed").uint(ctx.seed);
    w.key("generator").begin_array();
    for c in &checks {
        w.begin_object();
        w.key("family").string(&c.family.to_string());
        w.key("indices").begin_array();
        for i in c.indices {
            w.int(i as i64);
        }
        w.end_array();
        w.key("reduced").string(&c.reduced);
        w.key("zero").boolean(c.zero);
        w.end_object();
    }
    w.end_array();
    if !action_reports.is_empty() {
        w.key("group_actions").begin_object();
        for (name, rep) in &action_reports {
            w.key(name);
            write_residual_report(&mut w, rep);
        }
        w.end_object();
    }
    w.key("pass").boolean(generator_pass && actions_pass);
    w.end_object();
    let mut s = w.finish();
    s.push('\n');
    emit(ctx, &s)?;

    // Condensed per-family summary on stderr for interactive use.
    for family in ['A', 'B', 'C', 'D', 'E', 'F'] {
        let ok = checks.iter().filter(|c| c.family == family).all(|c| c.zero);
        eprintln!("family {family}: {}", if ok { "zero" } else { "NONZERO" });
    }

    Ok(if generator_pass && actions_pass { 0 } else { 2 })
}

/// export: sampled net grid as CSV/JSON/gnuplot.
pub fn cmd_export(spec_path: &Path, ctx: &Ctx) -> Result<i32, CmdError> {
    let spec = load_spec(spec_path)?;
    let net = spec.build()?;
    let grid = net.domain().grid(ctx.grid, 0.05);
    match ctx.format {
        Format::Csv => {
            let mut s = String::from("x1,x2,x3,l1,l2,l3\n");
            for &p in &grid {
                let l = net.l_at(p)?;
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_float(p[0]),
                    fmt_float(p[1]),
                    fmt_float(p[2]),
                    fmt_float(l[0]),
                    fmt_float(l[1]),
                    fmt_float(l[2]),
                ));
            }
            emit(ctx, &s)?;
        }
        Format::Json => {
            let mut w = JsonWriter::new();
            w.begin_object();
            w.key("command").string("export");
            w.key("seed").uint(ctx.seed);
            w.key("rows").begin_array();
            for &p in &grid {
                let l = net.l_at(p)?;
                w.begin_object();
                w.key("point").float_array(&p);
                w.key("l").float_array(&l);
                w.end_object();
            }
            w.end_array();
            if let Some(t) = net.translation() {
                // Conserved-quantity drift table for the elliptic family.
                let (lo, hi) = t.xi_range();
                w.key("conserved").begin_array();
                for n in 0..16 {
                    let xi = lo + (hi - lo) * (n as f64 + 0.5) / 16.0;
                    let iv = conserved_quantities(&net, xi)?;
                    w.begin_object();
                    w.key("xi").float(xi);
                    w.key("I").float_array(&iv);
                    w.end_object();
                }
                w.end_array();
            }
            w.end_object();
            let mut s = w.finish();
            s.push('\n');
            emit(ctx, &s)?;
        }
        Format::Gnuplot => {
            let mut s = String::from("# x1 x2 x3 l1 l2 l3\n");
            for &p in &grid {
                let l = net.l_at(p)?;
                s.push_str(&format!(
                    "{} {} {} {} {} {}\n",
                    fmt_float(p[0]),
                    fmt_float(p[1]),
                    fmt_float(p[2]),
                    fmt_float(l[0]),
                    fmt_float(l[1]),
                    fmt_float(l[2]),
                ));
            }
            emit(ctx, &s)?;
        }
    }
    Ok(0)
}
