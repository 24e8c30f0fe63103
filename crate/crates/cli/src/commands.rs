use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use casimir_core::geometry::{beta_corrected_gradient, pfa_gradient, roughness_corrected_gradient, SpherePlate};
use casimir_core::lifshitz::{energy_zero_t, force_zero_t, free_energy, pressure, CasimirResult, MatsubaraConfig};
use casimir_core::materials::{catalog, file::parse_materials};
use casimir_core::optics::{self, ExtrapolationSpec, OpticalDataTable};
use casimir_core::thermo::{self, Convention, NernstReport};
use casimir_core::MaterialModel;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ConfigFile;
use crate::error::{CliError, CliResult};
use crate::{
    BandArgs, BandParam, Common, ComputeArgs, ConventionArg, ExtMode, IngestArgs, NernstArgs, Quantity,
    QuantityArgs, ScanArgs, Spacing, SweepArgs, Variable,
};

/// Default sphere radius, m.
const DEFAULT_RADIUS: f64 = 150e-6;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn units(q: Quantity) -> &'static str {
    match q {
        Quantity::FreeEnergy => "J/m^2",
        Quantity::Pressure => "N/m^2",
        Quantity::Gradient => "N/m",
        Quantity::Entropy => "J/(m^2 K)",
        Quantity::ThermalCorrection => "1",
    }
}

fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::FreeEnergy => "free_energy",
        Quantity::Pressure => "pressure",
        Quantity::Gradient => "gradient",
        Quantity::Entropy => "entropy",
        Quantity::ThermalCorrection => "thermal_correction",
    }
}

fn resolve_material(name: &str, custom: &[(String, MaterialModel)]) -> CliResult<MaterialModel> {
    if let Some((_, m)) = custom.iter().find(|(n, _)| n == name) {
        return Ok(m.clone());
    }
    if let Some(path) = name.strip_prefix("cache:") {
        return Ok(optics::load_cached_material(Path::new(path))?);
    }
    Ok(catalog::lookup(name)?)
}

/// Resolved plates and engine configuration.
struct Plates {
    m1: MaterialModel,
    m2: MaterialModel,
    engine: MatsubaraConfig,
    file: ConfigFile,
}

fn plates(common: &Common) -> CliResult<Plates> {
    let file = ConfigFile::load(common.config.as_deref())?;
    let materials_path: Option<PathBuf> = file.pick_opt(common.materials.clone(), "materials")?;
    let custom = match materials_path {
        Some(p) => {
            let text = fs::read_to_string(&p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
            parse_materials(&text)?
        }
        None => Vec::new(),
    };
    let name: String = file
        .pick_opt(common.model.clone(), "model")?
        .ok_or_else(|| usage("--model is required"))?;
    let name2: String = file.pick(common.model2.clone(), "model2", name.clone())?;
    let rel_tol = file.pick(common.rel_tol, "rel_tol", MatsubaraConfig::default().rel_tol)?;
    let engine = MatsubaraConfig::default().with_rel_tol(rel_tol);
    engine.validate()?;
    Ok(Plates {
        m1: resolve_material(&name, &custom)?,
        m2: resolve_material(&name2, &custom)?,
        engine,
        file,
    })
}

/// Quantity and geometry settings after config-file merging.
struct Target {
    quantity: Quantity,
    radius: f64,
    beta: f64,
    delta: (f64, f64),
    convention: Convention,
}

fn target(what: &QuantityArgs, file: &ConfigFile, default: Quantity) -> CliResult<Target> {
    let convention = match file.pick(what.convention, "convention", ConventionArg::AtT)? {
        ConventionArg::AtT => Convention::AtT,
        ConventionArg::AtZero => Convention::AtZero,
    };
    Ok(Target {
        quantity: file.pick(what.quantity, "quantity", default)?,
        radius: file.pick(what.radius, "radius", DEFAULT_RADIUS)?,
        beta: file.pick(what.beta, "beta", 0.0)?,
        delta: (file.pick(what.delta1, "delta1", 0.0)?, file.pick(what.delta2, "delta2", 0.0)?),
        convention,
    })
}

#[derive(Debug, Clone, Serialize)]
struct Record {
    quantity: &'static str,
    a: f64,
    temperature: f64,
    value: f64,
    units: &'static str,
    truncation_error: Option<f64>,
    terms_used: Option<u64>,
    converged: Option<bool>,
    warnings: Vec<String>,
}

fn record(t: &Target, a: f64, temp: f64, value: f64) -> Record {
    Record {
        quantity: quantity_name(t.quantity),
        a,
        temperature: temp,
        value,
        units: units(t.quantity),
        truncation_error: None,
        terms_used: None,
        converged: None,
        warnings: Vec::new(),
    }
}

fn with_engine(mut r: Record, res: &CasimirResult) -> Record {
    r.truncation_error = Some(res.truncation_error);
    r.terms_used = Some(res.terms_used);
    r.converged = Some(res.converged);
    r
}

fn evaluate(p: &Plates, t: &Target, a: f64, temp: f64) -> CliResult<Record> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(usage(format!("separation must be positive, got {a}")));
    }
    if !(temp >= 0.0 && temp.is_finite()) {
        return Err(usage(format!("temperature must be non-negative, got {temp}")));
    }
    let cfg = p.engine.with_temperature(temp);
    let zero = temp == 0.0;
    let (m1, m2) = (&p.m1, &p.m2);
    Ok(match t.quantity {
        Quantity::FreeEnergy => {
            let r = if zero { energy_zero_t(a, m1, m2, &cfg)? } else { free_energy(a, m1, m2, &cfg)? };
            with_engine(record(t, a, temp, r.value), &r)
        }
        Quantity::Pressure => {
            let r = if zero { force_zero_t(a, m1, m2, &cfg)? } else { pressure(a, m1, m2, &cfg)? };
            with_engine(record(t, a, temp, r.value), &r)
        }
        Quantity::Gradient => {
            let r = if zero { force_zero_t(a, m1, m2, &cfg)? } else { pressure(a, m1, m2, &cfg)? };
            let sp = SpherePlate::new(t.radius, a)?
                .with_beta(t.beta)
                .with_roughness(t.delta.0, t.delta.1)?;
            let g = pfa_gradient(&sp, r.value);
            let rough = roughness_corrected_gradient(&sp, beta_corrected_gradient(&sp, g.value));
            let scale = (rough.value / r.value).abs();
            let mut rec = with_engine(record(t, a, temp, rough.value), &r);
            rec.truncation_error = Some(r.truncation_error * scale);
            rec.warnings = g.warnings.into_iter().chain(rough.warnings).collect();
            rec
        }
        Quantity::Entropy => {
            if zero {
                return Err(usage("entropy needs T > 0"));
            }
            let s = thermo::entropy(a, temp, m1, m2, &cfg)?;
            let mut rec = record(t, a, temp, s.entropy);
            rec.truncation_error = Some(s.fd_error_estimate);
            if s.inconclusive {
                rec.warnings.push("finite-difference noise exceeds 1% of the entropy".into());
            }
            rec
        }
        Quantity::ThermalCorrection => {
            if zero {
                return Err(usage("thermal correction needs T > 0"));
            }
            let v = thermo::thermal_correction(a, temp, m1, m2, &cfg, t.convention)?;
            record(t, a, temp, v)
        }
    })
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn compute(args: ComputeArgs) -> CliResult<()> {
    let p = plates(&args.common)?;
    let t = target(&args.what, &p.file, Quantity::Pressure)?;
    let a: f64 = p.file.pick_opt(args.a, "a")?.ok_or_else(|| usage("--a is required"))?;
    let temp: f64 = p.file.pick(args.t, "T", 300.0)?;
    let rec = evaluate(&p, &t, a, temp)?;
    print_json(&rec)
}

/// A validated one-dimensional sweep.
#[derive(Debug, Clone)]
struct SweepSpec {
    variable: Variable,
    points: Vec<f64>,
    spacing: Spacing,
    fixed: f64,
    output: Option<PathBuf>,
    plot: bool,
}

fn sweep_spec(s: &SweepArgs, file: &ConfigFile) -> CliResult<SweepSpec> {
    let variable = file.pick(s.variable, "variable", Variable::Separation)?;
    let spacing = file.pick(s.spacing, "spacing", Spacing::Linear)?;
    let min: f64 = file.pick_opt(s.min, "min")?.ok_or_else(|| usage("--min is required"))?;
    let max: f64 = file.pick_opt(s.max, "max")?.ok_or_else(|| usage("--max is required"))?;
    let count: usize = file.pick(s.count, "count", 11)?;
    if !(min < max) {
        return Err(usage(format!("sweep range needs min < max, got [{min}, {max}]")));
    }
    if count < 2 {
        return Err(usage("sweep count must be at least 2"));
    }
    if spacing == Spacing::Log && !(min > 0.0) {
        return Err(usage("log spacing needs min > 0"));
    }
    let points = (0..count)
        .map(|i| {
            let f = i as f64 / (count - 1) as f64;
            match spacing {
                Spacing::Linear => min + f * (max - min),
                Spacing::Log => min * (max / min).powf(f),
            }
        })
        .collect();
    let fixed = match variable {
        Variable::Separation => file.pick(s.t, "T", 300.0)?,
        Variable::Temperature => file.pick_opt(s.a, "a")?.ok_or_else(|| usage("--a is required for a temperature sweep"))?,
    };
    let output: Option<PathBuf> = file.pick_opt(s.output.clone(), "output")?;
    let plot = s.plot || file.get::<bool>("plot")?.unwrap_or(false);
    if plot && output.is_none() {
        return Err(usage("--plot needs --output"));
    }
    Ok(SweepSpec {
        variable,
        points,
        spacing,
        fixed,
        output,
        plot,
    })
}

impl SweepSpec {
    fn coords(&self, x: f64) -> (f64, f64) {
        match self.variable {
            Variable::Separation => (x, self.fixed),
            Variable::Temperature => (self.fixed, x),
        }
    }
}

fn error_column(e: &CliError) -> String {
    e.to_string().replace(['\n', '\r'], " ")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// Writes CSV rows to the sweep destination, then the plot script if asked.
fn emit(spec: &SweepSpec, header: &[String], rows: Vec<Vec<String>>, ylabel: &str, columns: &[usize]) -> CliResult<()> {
    let sink: Box<dyn Write> = match &spec.output {
        Some(p) => Box::new(fs::File::create(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    if spec.plot {
        let out = spec.output.as_ref().expect("checked in sweep_spec");
        write_plot_script(spec, out, header, ylabel, columns)?;
    }
    Ok(())
}

fn write_plot_script(spec: &SweepSpec, csv_path: &Path, header: &[String], ylabel: &str, columns: &[usize]) -> CliResult<()> {
    let xcol = match spec.variable {
        Variable::Separation => 1,
        Variable::Temperature => 2,
    };
    let name = csv_path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set xlabel '{}'\n", header[xcol - 1]));
    s.push_str(&format!("set ylabel '{ylabel}'\n"));
    if spec.spacing == Spacing::Log {
        s.push_str("set logscale x\n");
    }
    let plots: Vec<String> = columns
        .iter()
        .map(|c| format!("'{name}' using {xcol}:{c} skip 1 with linespoints title '{}'", header[c - 1]))
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    let path = csv_path.with_extension("gp");
    fs::write(&path, s).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(())
}

/// First row-level failure, to be reported after the CSV is written.
fn first_failure<T>(results: &[CliResult<T>]) -> Option<CliError> {
    results.iter().find_map(|r| match r {
        Err(CliError::Usage(m)) => Some(CliError::Usage(format!("row failed: {m}"))),
        Err(CliError::Data(m)) => Some(CliError::Data(format!("row failed: {m}"))),
        Err(CliError::Numeric(m)) => Some(CliError::Numeric(format!("row failed: {m}"))),
        Ok(_) => None,
    })
}

pub fn scan(args: ScanArgs) -> CliResult<()> {
    let p = plates(&args.common)?;
    let t = target(&args.what, &p.file, Quantity::Pressure)?;
    let spec = sweep_spec(&args.sweep, &p.file)?;
    let results: Vec<CliResult<Record>> = spec
        .points
        .par_iter()
        .map(|&x| {
            let (a, temp) = spec.coords(x);
            evaluate(&p, &t, a, temp)
        })
        .collect();
    let u = units(t.quantity);
    let qn = quantity_name(t.quantity);
    let header = vec![
        "a [m]".to_string(),
        "T [K]".to_string(),
        format!("{qn} [{u}]"),
        format!("truncation_error [{u}]"),
        "error".to_string(),
    ];
    let rows = spec
        .points
        .iter()
        .zip(&results)
        .map(|(&x, r)| {
            let (a, temp) = spec.coords(x);
            let mut row = vec![format!("{a:e}"), format!("{temp:e}")];
            match r {
                Ok(rec) => row.extend([format!("{:e}", rec.value), fmt_opt(rec.truncation_error), String::new()]),
                Err(e) => row.extend([String::new(), String::new(), error_column(e)]),
            }
            row
        })
        .collect();
    emit(&spec, &header, rows, &format!("{qn} [{u}]"), &[3])?;
    match first_failure(&results) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Per-abscissa (low, high) over the swept parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
struct BandPoint {
    low: f64,
    high: f64,
}

pub fn band(args: BandArgs) -> CliResult<()> {
    let p = plates(&args.common)?;
    let t = target(&args.what, &p.file, Quantity::Gradient)?;
    let spec = sweep_spec(&args.sweep, &p.file)?;
    let BandParam::OmegaP = p.file.pick(args.param, "param", BandParam::OmegaP)?;
    let lo: f64 = p.file.pick_opt(args.param_min, "param_min")?.ok_or_else(|| usage("--param-min is required"))?;
    let hi: f64 = p.file.pick_opt(args.param_max, "param_max")?.ok_or_else(|| usage("--param-max is required"))?;
    if !(lo > 0.0 && lo <= hi) {
        return Err(usage(format!("parameter interval needs 0 < min <= max, got [{lo}, {hi}]")));
    }
    let steps: usize = p.file.pick(args.param_steps, "param_steps", 5)?;
    if steps < 1 {
        return Err(usage("--param-steps must be at least 1"));
    }
    let values: Vec<f64> = if lo == hi || steps == 1 {
        vec![lo]
    } else {
        (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect()
    };
    let variants: Vec<Plates> = values
        .iter()
        .map(|&wp| {
            Ok(Plates {
                m1: p.m1.with_omega_p(wp)?,
                m2: p.m2.with_omega_p(wp)?,
                engine: p.engine,
                file: ConfigFile::default(),
            })
        })
        .collect::<CliResult<_>>()?;
    let results: Vec<CliResult<BandPoint>> = spec
        .points
        .par_iter()
        .map(|&x| {
            let (a, temp) = spec.coords(x);
            let mut bp = BandPoint {
                low: f64::INFINITY,
                high: f64::NEG_INFINITY,
            };
            for v in &variants {
                let r = evaluate(v, &t, a, temp)?;
                bp.low = bp.low.min(r.value);
                bp.high = bp.high.max(r.value);
            }
            Ok(bp)
        })
        .collect();
    let u = units(t.quantity);
    let qn = quantity_name(t.quantity);
    let header = vec![
        "a [m]".to_string(),
        "T [K]".to_string(),
        format!("{qn}_low [{u}]"),
        format!("{qn}_high [{u}]"),
        "error".to_string(),
    ];
    let rows = spec
        .points
        .iter()
        .zip(&results)
        .map(|(&x, r)| {
            let (a, temp) = spec.coords(x);
            let mut row = vec![format!("{a:e}"), format!("{temp:e}")];
            match r {
                Ok(b) => row.extend([format!("{:e}", b.low), format!("{:e}", b.high), String::new()]),
                Err(e) => row.extend([String::new(), String::new(), error_column(e)]),
            }
            row
        })
        .collect();
    emit(&spec, &header, rows, &format!("{qn} [{u}]"), &[3, 4])?;
    match first_failure(&results) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

#[derive(Debug, Serialize)]
struct IngestSummary {
    table_rows: usize,
    rows: usize,
    digest: String,
    cache_path: String,
    from_cache: bool,
    xi_1: f64,
    eps_xi_1: f64,
}

pub fn ingest(args: IngestArgs) -> CliResult<()> {
    let file = ConfigFile::load(args.config.as_deref())?;
    let input: PathBuf = file.pick_opt(args.input, "input")?.ok_or_else(|| usage("--input is required"))?;
    let mode = file.pick(args.ext, "ext", ExtMode::Drude)?;
    let omega_p: f64 = file.pick_opt(args.omega_p, "omega_p")?.ok_or_else(|| usage("--omega-p is required"))?;
    let ext = match mode {
        ExtMode::Drude => {
            let gamma: f64 = file.pick_opt(args.gamma, "gamma")?.ok_or_else(|| usage("--gamma is required in drude mode"))?;
            ExtrapolationSpec::drude(omega_p, gamma)?
        }
        ExtMode::Plasma => ExtrapolationSpec::plasma(omega_p)?,
    };
    let temp: f64 = file.pick(args.t, "T", 300.0)?;
    let l_max: u64 = file.pick(args.l_max, "l_max", 200)?;
    let dir: PathBuf = file.pick(args.cache_dir, "cache_dir", optics::cache_dir())?;
    let text = fs::read_to_string(&input).map_err(|e| CliError::Data(format!("{}: {e}", input.display())))?;
    let table = OpticalDataTable::parse(&text).map_err(|e| CliError::Data(format!("{}: {e}", input.display())))?;
    let out = optics::ingest(&table, &ext, temp, l_max, &dir)?;
    let (_, xi1, eps1) = out.samples[0];
    print_json(&IngestSummary {
        table_rows: table.len(),
        rows: out.samples.len(),
        digest: out.digest,
        cache_path: out.cache_path.display().to_string(),
        from_cache: out.from_cache,
        xi_1: xi1,
        eps_xi_1: eps1,
    })
}

#[derive(Debug, Serialize)]
struct NernstOutput<'a> {
    a: f64,
    model: &'a str,
    #[serde(flatten)]
    report: NernstReport,
}

pub fn nernst(args: NernstArgs) -> CliResult<()> {
    let p = plates(&args.common)?;
    let a: f64 = p.file.pick_opt(args.a, "a")?.ok_or_else(|| usage("--a is required"))?;
    let grid: Option<String> = p.file.pick_opt(args.grid, "grid")?;
    let grid = match grid {
        Some(g) => g
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| usage(format!("bad grid value '{s}'"))))
            .collect::<CliResult<Vec<f64>>>()?,
        None => {
            let t_high = p.file.pick(args.t_high, "t_high", 30.0)?;
            let decades = p.file.pick(args.decades, "decades", 2.0)?;
            let per = p.file.pick(args.per_decade, "per_decade", 6)?;
            if !(t_high > 0.0 && decades > 0.0 && per > 0) {
                return Err(usage("--t-high, --decades and --per-decade must be positive"));
            }
            thermo::log_grid(t_high, decades, per)
        }
    };
    let report = thermo::nernst_scan(a, &p.m1, &p.m2, &grid, &p.engine)?;
    let name = args.common.model.as_deref().unwrap_or("");
    print_json(&NernstOutput { a, model: name, report })
}
