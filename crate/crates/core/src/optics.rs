//! Tabulated optical data to ε(iξ) by the Kramers-Kronig relation
//!
//! ε(iξ) = 1 + (2/π) ∫_0^∞ ω Im ε(ω)/(ω² + ξ²) dω,
//!
//! with the table extended below its first frequency by a Drude form (or, in
//! plasma mode, by nothing, the free-electron term ω_p²/ξ² being added
//! separately) and above its last frequency by an ω⁻³ power law.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{domain, CasimirError, Result};
use crate::lifshitz::matsubara_frequency;
use crate::materials::{MaterialModel, Response, TabulatedPermittivity, ZeroFrequency};

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "CASIMIR_CACHE_DIR";
/// Smallest ξ (eV) the transform is evaluated at.
pub const XI_FLOOR: f64 = 1e-6;
pub const MIN_ROWS: usize = 20;
pub const MIN_DECADES: f64 = 2.0;
/// Trapezoid sub-steps per table interval.
pub const DEFAULT_SUBDIVISIONS: usize = 8;

fn ingest_err(line: Option<usize>, message: impl Into<String>) -> CasimirError {
    CasimirError::Ingestion {
        line,
        message: message.into(),
    }
}

/// Im ε(ω) samples on strictly increasing ω (eV).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpticalDataTable {
    omega: Vec<f64>,
    eps_imag: Vec<f64>,
}

impl OpticalDataTable {
    pub fn new(rows: Vec<(f64, f64)>) -> Result<Self> {
        Self::from_numbered(rows.into_iter().enumerate().map(|(i, r)| (i + 1, r)).collect())
    }

    fn from_numbered(rows: Vec<(usize, (f64, f64))>) -> Result<Self> {
        let mut omega = Vec::with_capacity(rows.len());
        let mut eps_imag = Vec::with_capacity(rows.len());
        for (line, (w, e)) in rows {
            if !(w > 0.0 && w.is_finite()) {
                return Err(ingest_err(Some(line), format!("frequency must be positive, got {w}")));
            }
            if !(e >= 0.0 && e.is_finite()) {
                return Err(ingest_err(Some(line), format!("Im eps must be non-negative, got {e}")));
            }
            if let Some(&prev) = omega.last() {
                if w <= prev {
                    return Err(ingest_err(Some(line), "frequencies must be strictly increasing"));
                }
            }
            omega.push(w);
            eps_imag.push(e);
        }
        if omega.len() < MIN_ROWS {
            return Err(ingest_err(
                None,
                format!("table has {} rows, need at least {MIN_ROWS}", omega.len()),
            ));
        }
        let decades = (omega[omega.len() - 1] / omega[0]).log10();
        if decades < MIN_DECADES {
            return Err(ingest_err(
                None,
                format!("table spans {decades:.2} decades, need at least {MIN_DECADES}"),
            ));
        }
        Ok(Self { omega, eps_imag })
    }

    /// Parses whitespace-separated rows of `omega_eV eps_imag`, or
    /// `omega_eV n k` (converted to Im ε = 2nk). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut width = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let nums: Vec<f64> = body
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| ingest_err(Some(line), format!("bad number: {e}")))?;
            if !(nums.len() == 2 || nums.len() == 3) {
                return Err(ingest_err(
                    Some(line),
                    format!("expected 2 or 3 columns, got {}", nums.len()),
                ));
            }
            match width {
                None => width = Some(nums.len()),
                Some(w) if w != nums.len() => {
                    return Err(ingest_err(Some(line), "column count changes mid-file"))
                }
                _ => {}
            }
            let im = if nums.len() == 3 {
                if nums[1] < 0.0 || nums[2] < 0.0 {
                    return Err(ingest_err(Some(line), "n and k must be non-negative"));
                }
                2.0 * nums[1] * nums[2]
            } else {
                nums[1]
            };
            rows.push((line, (nums[0], im)));
        }
        Self::from_numbered(rows)
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omega.iter().copied().zip(self.eps_imag.iter().copied())
    }

    pub fn omega_min(&self) -> f64 {
        self.omega[0]
    }

    pub fn omega_max(&self) -> f64 {
        self.omega[self.omega.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtrapolationMode {
    Drude,
    Plasma,
}

/// Low-frequency continuation of a table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtrapolationSpec {
    pub mode: ExtrapolationMode,
    /// eV.
    pub omega_p: f64,
    /// eV; unused in plasma mode.
    pub gamma: f64,
}

impl ExtrapolationSpec {
    pub fn drude(omega_p: f64, gamma: f64) -> Result<Self> {
        if !(omega_p > 0.0 && gamma > 0.0) {
            return Err(CasimirError::Config(format!(
                "drude extrapolation needs omega_p > 0 and gamma > 0, got {omega_p}, {gamma}"
            )));
        }
        Ok(Self {
            mode: ExtrapolationMode::Drude,
            omega_p,
            gamma,
        })
    }

    pub fn plasma(omega_p: f64) -> Result<Self> {
        if !(omega_p > 0.0) {
            return Err(CasimirError::Config(format!(
                "plasma extrapolation needs omega_p > 0, got {omega_p}"
            )));
        }
        Ok(Self {
            mode: ExtrapolationMode::Plasma,
            omega_p,
            gamma: 0.0,
        })
    }

    fn validate(&self) -> Result<()> {
        match self.mode {
            ExtrapolationMode::Drude => Self::drude(self.omega_p, self.gamma).map(|_| ()),
            ExtrapolationMode::Plasma => Self::plasma(self.omega_p).map(|_| ()),
        }
    }
}

/// ∫_0^w dω/((ω² + γ²)(ω² + ξ²)).
fn drude_head(w: f64, gamma: f64, xi: f64) -> f64 {
    let d = xi * xi - gamma * gamma;
    if (xi - gamma).abs() < 1e-6 * gamma {
        // Coincident poles: ∫ dω/(ω² + γ²)².
        return w / (2.0 * gamma * gamma * (w * w + gamma * gamma)) + (w / gamma).atan() / (2.0 * gamma.powi(3));
    }
    ((w / gamma).atan() / gamma - (w / xi).atan() / xi) / d
}

/// ∫_w^∞ ω·(w/ω)³/(ω² + ξ²) dω = w³ ∫_w^∞ dω/(ω²(ω² + ξ²)).
fn power_tail(w: f64, xi: f64) -> f64 {
    let t = xi / w;
    if t < 0.1 {
        // 1/3 − t²/5 + t⁴/7 − ...
        let t2 = t * t;
        let mut sum = 0.0;
        let mut p = 1.0;
        for k in 0..12 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * p / (2 * k + 3) as f64;
            p *= t2;
        }
        sum
    } else {
        w * w * w / (xi * xi) * (1.0 / w - t.atan() / xi)
    }
}

/// (2/π)∫ over the table range plus the ω⁻³ tail, with Im ε linear in ln ω
/// between rows.
fn table_term(table: &OpticalDataTable, xi: f64, subdivisions: usize) -> f64 {
    let xi2 = xi * xi;
    let kernel = |w: f64| w * w / (w * w + xi2);
    let mut sum = 0.0;
    for i in 0..table.omega.len() - 1 {
        let (w0, w1) = (table.omega[i], table.omega[i + 1]);
        let (e0, e1) = (table.eps_imag[i], table.eps_imag[i + 1]);
        let (u0, du) = (w0.ln(), (w1 / w0).ln() / subdivisions as f64);
        let mut seg = 0.5 * (e0 * kernel(w0) + e1 * kernel(w1));
        for j in 1..subdivisions {
            let f = j as f64 / subdivisions as f64;
            let w = (u0 + j as f64 * du).exp();
            seg += (e0 + f * (e1 - e0)) * kernel(w);
        }
        sum += seg * du;
    }
    let last = table.eps_imag[table.eps_imag.len() - 1];
    sum += last * power_tail(table.omega_max(), xi);
    2.0 / PI * sum
}

/// ε(iξ) from the table and extrapolation, ξ in eV.
pub fn kk_to_imag_axis(table: &OpticalDataTable, ext: &ExtrapolationSpec, xi: f64) -> Result<f64> {
    kk_to_imag_axis_with(table, ext, xi, DEFAULT_SUBDIVISIONS)
}

/// As [`kk_to_imag_axis`] with an explicit number of trapezoid sub-steps per
/// table interval.
pub fn kk_to_imag_axis_with(
    table: &OpticalDataTable,
    ext: &ExtrapolationSpec,
    xi: f64,
    subdivisions: usize,
) -> Result<f64> {
    ext.validate()?;
    if !(xi >= XI_FLOOR && xi.is_finite()) {
        return domain(format!("xi must be at least {XI_FLOOR} eV, got {xi}"));
    }
    let core = table_term(table, xi, subdivisions.max(1));
    let wp2 = ext.omega_p * ext.omega_p;
    Ok(match ext.mode {
        ExtrapolationMode::Drude => {
            let head = 2.0 / PI * wp2 * ext.gamma * drude_head(table.omega_min(), ext.gamma, xi);
            1.0 + core + head
        }
        ExtrapolationMode::Plasma => 1.0 + wp2 / (xi * xi) + core,
    })
}

/// ε(iξ_l) for l = 1..=l_max at temperature `t`.
pub fn matsubara_samples(table: &OpticalDataTable, ext: &ExtrapolationSpec, t: f64, l_max: u64) -> Result<Vec<(u64, f64, f64)>> {
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("temperature must be positive, got {t}"));
    }
    if l_max < 2 {
        return Err(CasimirError::Config("l_max must be at least 2".into()));
    }
    (1..=l_max)
        .map(|l| {
            let xi = matsubara_frequency(l, t);
            kk_to_imag_axis(table, ext, xi).map(|e| (l, xi, e))
        })
        .collect()
}

fn zero_frequency(ext: &ExtrapolationSpec) -> ZeroFrequency {
    match ext.mode {
        ExtrapolationMode::Drude => ZeroFrequency::Drude,
        ExtrapolationMode::Plasma => ZeroFrequency::Plasma { omega_p: ext.omega_p },
    }
}

fn material_from_samples(samples: &[(u64, f64, f64)], ext: &ExtrapolationSpec) -> Result<MaterialModel> {
    let pts = samples.iter().map(|&(_, x, e)| (x, e)).collect();
    Ok(MaterialModel::new(Response::Tabulated(TabulatedPermittivity::new(
        pts,
        zero_frequency(ext),
    )?)))
}

/// Tabulated material holding ε(iξ_l), l = 1..=l_max, at temperature `t`.
pub fn build_material(table: &OpticalDataTable, ext: &ExtrapolationSpec, t: f64, l_max: u64) -> Result<MaterialModel> {
    material_from_samples(&matsubara_samples(table, ext, t, l_max)?, ext)
}

/// Hex SHA-256 of the table, extrapolation, temperature and l_max.
pub fn cache_digest(table: &OpticalDataTable, ext: &ExtrapolationSpec, t: f64, l_max: u64) -> String {
    let mut h = Sha256::new();
    for (w, e) in table.rows() {
        h.update(w.to_le_bytes());
        h.update(e.to_le_bytes());
    }
    h.update(match ext.mode {
        ExtrapolationMode::Drude => b"drude",
        ExtrapolationMode::Plasma => b"plasm",
    });
    h.update(ext.omega_p.to_le_bytes());
    h.update(ext.gamma.to_le_bytes());
    h.update(t.to_le_bytes());
    h.update(l_max.to_le_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// `$CASIMIR_CACHE_DIR`, or `casimir-cache` under the system temp directory.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("casimir-cache"))
}

fn zero_frequency_tag(ext: &ExtrapolationSpec) -> String {
    match ext.mode {
        ExtrapolationMode::Drude => "drude".to_string(),
        ExtrapolationMode::Plasma => format!("plasma {:e}", ext.omega_p),
    }
}

fn render_cache(digest: &str, ext: &ExtrapolationSpec, samples: &[(u64, f64, f64)]) -> String {
    let mut s = format!(
        "# digest {digest}\n# zero_frequency {}\n# l xi_eV eps\n",
        zero_frequency_tag(ext)
    );
    for (l, xi, e) in samples {
        s.push_str(&format!("{l} {xi:e} {e:e}\n"));
    }
    s
}

/// Writes the cache file `<digest>.eps` into `dir` by atomic replacement.
pub fn write_cache(dir: &Path, digest: &str, ext: &ExtrapolationSpec, samples: &[(u64, f64, f64)]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CasimirError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("{digest}.eps"));
    let io = |e: std::io::Error| CasimirError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(render_cache(digest, ext, samples).as_bytes()).map_err(io)?;
    tmp.persist(&path).map_err(|e| io(e.error))?;
    Ok(path)
}

/// Reads a cache file back as (l, ξ, ε) rows.
pub fn read_cache(path: &Path) -> Result<Vec<(u64, f64, f64)>> {
    let text = fs::read_to_string(path).map_err(|e| CasimirError::Io(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let parts: Vec<&str> = body.split_whitespace().collect();
        let bad = || ingest_err(Some(idx + 1), "cache row must be 'l xi eps'");
        if parts.len() != 3 {
            return Err(bad());
        }
        let l = parts[0].parse::<u64>().map_err(|_| bad())?;
        let xi = parts[1].parse::<f64>().map_err(|_| bad())?;
        let e = parts[2].parse::<f64>().map_err(|_| bad())?;
        rows.push((l, xi, e));
    }
    Ok(rows)
}

/// Loads a cache file written by [`write_cache`] as a tabulated material,
/// using its `zero_frequency` header line.
pub fn load_cached_material(path: &Path) -> Result<MaterialModel> {
    let text = fs::read_to_string(path).map_err(|e| CasimirError::Io(format!("{}: {e}", path.display())))?;
    let tag = text
        .lines()
        .find_map(|l| l.strip_prefix("# zero_frequency "))
        .ok_or_else(|| ingest_err(None, "cache file has no zero_frequency line"))?;
    let ext = match tag.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["drude"] => ExtrapolationSpec {
            mode: ExtrapolationMode::Drude,
            omega_p: 1.0,
            gamma: 1.0,
        },
        ["plasma", wp] => ExtrapolationSpec::plasma(
            wp.parse()
                .map_err(|_| ingest_err(None, format!("bad plasma frequency '{wp}'")))?,
        )?,
        _ => return Err(ingest_err(None, format!("unknown zero_frequency '{tag}'"))),
    };
    material_from_samples(&read_cache(path)?, &ext)
}

/// Outcome of [`ingest`].
#[derive(Debug, Clone)]
pub struct Ingested {
    pub material: MaterialModel,
    pub cache_path: PathBuf,
    pub digest: String,
    pub samples: Vec<(u64, f64, f64)>,
    /// True when the samples came from an existing cache file.
    pub from_cache: bool,
}

/// Builds the tabulated material, reusing `<dir>/<digest>.eps` when present
/// and writing it otherwise.
pub fn ingest(table: &OpticalDataTable, ext: &ExtrapolationSpec, t: f64, l_max: u64, dir: &Path) -> Result<Ingested> {
    let digest = cache_digest(table, ext, t, l_max);
    let path = dir.join(format!("{digest}.eps"));
    let (samples, from_cache) = match read_cache(&path) {
        Ok(rows) if rows.len() as u64 == l_max => (rows, true),
        _ => {
            let rows = matsubara_samples(table, ext, t, l_max)?;
            write_cache(dir, &digest, ext, &rows)?;
            (rows, false)
        }
    };
    Ok(Ingested {
        material: material_from_samples(&samples, ext)?,
        cache_path: path,
        digest,
        samples,
        from_cache,
    })
}

/// Im ε of the Drude model, ω_p²γ/(ω(ω² + γ²)).
pub fn drude_eps_imag(omega: f64, omega_p: f64, gamma: f64) -> f64 {
    omega_p * omega_p * gamma / (omega * (omega * omega + gamma * gamma))
}

/// Log-spaced synthetic Drude table on [lo, hi] eV.
pub fn synthetic_drude_table(omega_p: f64, gamma: f64, lo: f64, hi: f64, per_decade: usize) -> Result<OpticalDataTable> {
    if !(lo > 0.0 && hi > lo) || per_decade == 0 {
        return domain("synthetic table needs 0 < lo < hi and per_decade > 0");
    }
    let n = ((hi / lo).log10() * per_decade as f64).round() as usize;
    let rows = (0..=n)
        .map(|i| {
            let w = lo * (hi / lo).powf(i as f64 / n as f64);
            (w, drude_eps_imag(w, omega_p, gamma))
        })
        .collect();
    OpticalDataTable::new(rows)
}
