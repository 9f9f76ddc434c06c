//! Parameter sweeps over `(J_C, ω_C)` grids, CSV output and figure presets.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::resources::{resources, Resources};
use crate::steady::{mme_steady_state, pme_steady_state, SolveMethod};

pub const CSV_HEADER: &str =
    "j_c,omega_c,model,concurrence,steering,bell,ss_residual,ss_method,liouvillian_gap,status";

/// Fraction of failed grid points above which a sweep counts as failed.
pub const FAILURE_THRESHOLD: f64 = 0.01;

/// Master equation used for one steady state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dynamics {
    Pme,
    Mme,
}

impl Dynamics {
    pub fn as_str(self) -> &'static str {
        match self {
            Dynamics::Pme => "pme",
            Dynamics::Mme => "mme",
        }
    }
}

impl fmt::Display for Dynamics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which master equations a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Pme,
    Mme,
    Both,
}

impl Model {
    pub fn dynamics(self) -> &'static [Dynamics] {
        match self {
            Model::Pme => &[Dynamics::Pme],
            Model::Mme => &[Dynamics::Mme],
            Model::Both => &[Dynamics::Pme, Dynamics::Mme],
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pme" => Ok(Model::Pme),
            "mme" => Ok(Model::Mme),
            "both" => Ok(Model::Both),
            other => Err(Error::Config(format!("unknown model '{other}' (expected pme, mme or both)"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Pme => "pme",
            Model::Mme => "mme",
            Model::Both => "both",
        })
    }
}

/// Linearly spaced axis, `steps` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        let g = Self { min, max, steps };
        g.validate()?;
        Ok(g)
    }

    pub fn single(value: f64) -> Self {
        Self {
            min: value,
            max: value,
            steps: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Config(format!("grid bounds must be finite, got {self}")));
        }
        if self.steps == 0 {
            return Err(Error::Config("grid needs at least one step".into()));
        }
        if self.min > self.max {
            return Err(Error::Config(format!("grid minimum exceeds maximum in {self}")));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * k as f64 / last
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// Parses `MIN:MAX:STEPS`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || Error::Config(format!("expected MIN:MAX:STEPS, got '{s}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let min = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
        let max = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
        let steps = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
        GridSpec::new(min, max, steps)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.steps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub model: Model,
    pub j_c: GridSpec,
    pub omega_c: GridSpec,
    pub omega0: f64,
    pub j: f64,
    /// Decay rate on all three sites; the Ohmic prefactor for the global model.
    pub gamma: f64,
    pub out: PathBuf,
    /// Worker threads; 0 picks one per available core.
    pub workers: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            model: Model::Both,
            j_c: GridSpec::single(0.0),
            omega_c: GridSpec::single(5.0),
            omega0: 0.1,
            j: 0.01,
            gamma: 1e-3,
            out: PathBuf::from("sweep.csv"),
            workers: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        self.j_c.validate()?;
        self.omega_c.validate()?;
        for (name, v) in [("omega0", self.omega0), ("j", self.j), ("gamma", self.gamma)] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        if self.omega0 <= 0.0 {
            return Err(Error::Config("omega0 must be positive".into()));
        }
        if self.omega_c.min <= 0.0 {
            return Err(Error::Config("omega_c must be positive".into()));
        }
        // the global model also needs a nonzero prefactor to have a unique steady state
        if self.gamma <= 0.0 {
            return Err(Error::Config("gamma must be positive".into()));
        }
        Ok(())
    }

    pub fn params(&self, j_c: f64, omega_c: f64) -> SystemParams {
        SystemParams::uniform(self.omega0, omega_c, self.j, j_c, self.gamma)
    }

    /// Grid points in output order: ω_C outermost, then J_C, then model.
    pub fn tasks(&self) -> Vec<(f64, f64, Dynamics)> {
        let mut out = Vec::new();
        for &wc in &self.omega_c.points() {
            for &jc in &self.j_c.points() {
                for &d in self.model.dynamics() {
                    out.push((jc, wc, d));
                }
            }
        }
        out
    }
}

/// Steady state and resources at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub resources: Resources,
    pub residual: f64,
    pub method: SolveMethod,
    pub gap: f64,
}

pub fn evaluate_point(p: &SystemParams, dynamics: Dynamics) -> Result<PointResult> {
    let report = match dynamics {
        Dynamics::Pme => pme_steady_state(p)?,
        Dynamics::Mme => mme_steady_state(p)?,
    };
    let rho_ab = crate::model::partial_trace_c(&report.rho)?;
    Ok(PointResult {
        resources: resources(&rho_ab)?,
        residual: report.residual,
        method: report.method,
        gap: report.gap(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub j_c: f64,
    pub omega_c: f64,
    pub dynamics: Dynamics,
    /// Error text when the steady state could not be computed.
    pub outcome: std::result::Result<PointResult, String>,
}

impl SweepRow {
    pub fn concurrence(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|r| r.resources.concurrence)
    }

    pub fn resources(&self) -> Option<Resources> {
        self.outcome.as_ref().ok().map(|r| r.resources)
    }

    fn csv_line(&self) -> String {
        let f = |x: f64| format!("{x:.16e}");
        match &self.outcome {
            Ok(r) => format!(
                "{},{},{},{},{},{},{},{},{},ok",
                f(self.j_c),
                f(self.omega_c),
                self.dynamics,
                f(r.resources.concurrence),
                f(r.resources.steering),
                f(r.resources.bell),
                f(r.residual),
                r.method,
                f(r.gap),
            ),
            Err(msg) => {
                let status: String = msg
                    .chars()
                    .map(|c| if c == ',' || c == '\n' || c == '\r' { ';' } else { c })
                    .collect();
                format!("{},{},{},,,,,,,error: {}", f(self.j_c), f(self.omega_c), self.dynamics, status)
            }
        }
    }
}

fn evaluate_task(cfg: &SweepConfig, (j_c, omega_c, dynamics): (f64, f64, Dynamics)) -> SweepRow {
    SweepRow {
        j_c,
        omega_c,
        dynamics,
        outcome: evaluate_point(&cfg.params(j_c, omega_c), dynamics).map_err(|e| e.to_string()),
    }
}

/// Evaluates every grid point, in output order.
#[cfg(feature = "parallel")]
pub fn compute_rows(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    use rayon::prelude::*;

    cfg.validate()?;
    let tasks = cfg.tasks();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| tasks.into_par_iter().map(|t| evaluate_task(cfg, t)).collect()))
}

/// Evaluates every grid point, in output order.
#[cfg(not(feature = "parallel"))]
pub fn compute_rows(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    Ok(compute_rows_sequential(cfg))
}

/// Single-threaded evaluation regardless of enabled features.
pub fn compute_rows_sequential(cfg: &SweepConfig) -> Vec<SweepRow> {
    cfg.tasks().into_iter().map(|t| evaluate_task(cfg, t)).collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.csv_line())?;
    }
    w.flush()
}

#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    pub failures: usize,
}

impl SweepSummary {
    pub fn failure_fraction(&self) -> f64 {
        if self.rows.is_empty() {
            0.0
        } else {
            self.failures as f64 / self.rows.len() as f64
        }
    }

    pub fn failed(&self) -> bool {
        self.failure_fraction() > FAILURE_THRESHOLD
    }
}

/// Computes the sweep and writes the CSV to `cfg.out`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepSummary> {
    let rows = compute_rows(cfg)?;
    let file = std::fs::File::create(&cfg.out)?;
    write_csv(&rows, std::io::BufWriter::new(file))?;
    let failures = rows.iter().filter(|r| r.outcome.is_err()).count();
    Ok(SweepSummary { rows, failures })
}

/// Figure presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig4c,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Fig1,
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig4a,
        Figure::Fig4b,
        Figure::Fig4c,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "1",
            Figure::Fig2 => "2",
            Figure::Fig3 => "3",
            Figure::Fig4a => "4a",
            Figure::Fig4b => "4b",
            Figure::Fig4c => "4c",
        }
    }

    pub fn coupling(self) -> f64 {
        match self {
            Figure::Fig1 | Figure::Fig4a => 0.01,
            Figure::Fig2 | Figure::Fig4b => 0.1,
            Figure::Fig3 | Figure::Fig4c => 1.0,
        }
    }

    pub fn is_contour(self) -> bool {
        matches!(self, Figure::Fig1 | Figure::Fig2 | Figure::Fig3)
    }

    pub fn config(self) -> SweepConfig {
        let base = SweepConfig {
            j: self.coupling(),
            out: PathBuf::from(format!("fig{}.csv", self.name())),
            ..SweepConfig::default()
        };
        if self.is_contour() {
            SweepConfig {
                model: Model::Mme,
                j_c: GridSpec {
                    min: 0.0,
                    max: 2.5,
                    steps: 101,
                },
                omega_c: GridSpec {
                    min: 0.05,
                    max: 5.0,
                    steps: 101,
                },
                ..base
            }
        } else {
            SweepConfig {
                model: Model::Both,
                j_c: GridSpec {
                    min: 0.0,
                    max: 5.0,
                    steps: 201,
                },
                omega_c: GridSpec::single(5.0),
                ..base
            }
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().trim_start_matches("fig").to_ascii_lowercase();
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown figure '{s}' (expected 1, 2, 3, 4a, 4b or 4c)")))
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fig{}", self.name())
    }
}

/// Gnuplot script for a sweep CSV, referring to it by file name.
pub fn plot_script(cfg: &SweepConfig, contour: bool) -> String {
    let csv = cfg
        .out
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep.csv".into());
    let stem = Path::new(&csv)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set terminal pngcairo size 900,700\n");
    s.push_str(&format!("set output '{stem}.png'\n"));
    s.push_str("set xlabel 'J_C'\n");
    if contour {
        let dynamics = cfg.model.dynamics()[0];
        s.push_str("set ylabel 'omega_C'\n");
        s.push_str("set cblabel 'concurrence'\n");
        s.push_str(&format!(
            "set title 'concurrence ({dynamics}), omega_0 = {}, J = {}'\n",
            cfg.omega0, cfg.j
        ));
        s.push_str("set view map\n");
        s.push_str("set cbrange [0:1]\n");
        s.push_str(&format!(
            "plot '{csv}' every ::1 using 1:2:(strcol(3) eq '{dynamics}' ? $4 : NaN) with image notitle\n"
        ));
    } else {
        s.push_str("set ylabel 'resource'\n");
        s.push_str(&format!(
            "set title 'omega_0 = {}, J = {}, omega_C = {}'\n",
            cfg.omega0, cfg.j, cfg.omega_c.min
        ));
        s.push_str("set yrange [0:1]\n");
        let mut series = Vec::new();
        for &d in cfg.model.dynamics() {
            series.push(format!(
                "'{csv}' every ::1 using 1:(strcol(3) eq '{d}' ? $4 : NaN) with lines title 'E {d}'"
            ));
        }
        if cfg.model != Model::Pme {
            series.push(format!(
                "'{csv}' every ::1 using 1:(strcol(3) eq 'mme' ? $5 : NaN) with lines title 'S mme'"
            ));
            series.push(format!(
                "'{csv}' every ::1 using 1:(strcol(3) eq 'mme' ? $6 : NaN) with lines title 'N mme'"
            ));
        }
        s.push_str("plot ");
        s.push_str(&series.join(", \\\n     "));
        s.push('\n');
    }
    s
}

/// Path of the plot script written next to a sweep CSV.
pub fn plot_script_path(csv: &Path) -> PathBuf {
    csv.with_extension("gp")
}

/// Runs a figure preset and writes its CSV and plot script.
pub fn run_figure(fig: Figure, cfg: &SweepConfig) -> Result<SweepSummary> {
    let summary = run_sweep(cfg)?;
    std::fs::write(plot_script_path(&cfg.out), plot_script(cfg, fig.is_contour()))?;
    Ok(summary)
}

/// Flat `key = value` settings, one per line, `#` starts a comment. Keys
/// mirror the command-line flags without the leading dashes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub model: Option<Model>,
    pub omega0: Option<f64>,
    pub omegac: Option<f64>,
    pub j: Option<f64>,
    pub jc: Option<f64>,
    pub gamma: Option<f64>,
    pub jc_range: Option<GridSpec>,
    pub omegac_range: Option<GridSpec>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            let num = |v: &str| -> Result<f64> {
                v.parse::<f64>()
                    .map_err(|_| Error::Config(format!("line {}: '{v}' is not a number", n + 1)))
            };
            match key.as_str() {
                "model" => s.model = Some(value.parse()?),
                "omega0" => s.omega0 = Some(num(value)?),
                "omegac" => s.omegac = Some(num(value)?),
                "j" => s.j = Some(num(value)?),
                "jc" => s.jc = Some(num(value)?),
                "gamma" => s.gamma = Some(num(value)?),
                "jc-range" => s.jc_range = Some(value.parse()?),
                "omegac-range" => s.omegac_range = Some(value.parse()?),
                "out" => s.out = Some(PathBuf::from(value)),
                "workers" => {
                    s.workers = Some(value.parse().map_err(|_| {
                        Error::Config(format!("line {}: '{value}' is not a worker count", n + 1))
                    })?)
                }
                other => return Err(Error::Config(format!("line {}: unknown key '{other}'", n + 1))),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// `self` with every field set in `over` replaced. Setting either the
    /// point or the range form of an axis replaces both forms.
    pub fn overridden_by(&self, over: &Settings) -> Settings {
        let mut s = self.clone();
        if over.jc.is_some() || over.jc_range.is_some() {
            s.jc = over.jc;
            s.jc_range = over.jc_range;
        }
        if over.omegac.is_some() || over.omegac_range.is_some() {
            s.omegac = over.omegac;
            s.omegac_range = over.omegac_range;
        }
        s.model = over.model.or(s.model);
        s.omega0 = over.omega0.or(s.omega0);
        s.j = over.j.or(s.j);
        s.gamma = over.gamma.or(s.gamma);
        s.out = over.out.clone().or(s.out);
        s.workers = over.workers.or(s.workers);
        s
    }

    pub fn apply(&self, base: &SweepConfig) -> Result<SweepConfig> {
        if self.jc.is_some() && self.jc_range.is_some() {
            return Err(Error::Config("both jc and jc-range given".into()));
        }
        if self.omegac.is_some() && self.omegac_range.is_some() {
            return Err(Error::Config("both omegac and omegac-range given".into()));
        }
        let mut cfg = base.clone();
        if let Some(m) = self.model {
            cfg.model = m;
        }
        if let Some(v) = self.omega0 {
            cfg.omega0 = v;
        }
        if let Some(v) = self.j {
            cfg.j = v;
        }
        if let Some(v) = self.gamma {
            cfg.gamma = v;
        }
        if let Some(v) = self.jc {
            cfg.j_c = GridSpec::single(v);
        }
        if let Some(g) = self.jc_range {
            cfg.j_c = g;
        }
        if let Some(v) = self.omegac {
            cfg.omega_c = GridSpec::single(v);
        }
        if let Some(g) = self.omegac_range {
            cfg.omega_c = g;
        }
        if let Some(p) = &self.out {
            cfg.out = p.clone();
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: GridSpec = "0:2.5:101".parse().unwrap();
        assert_eq!(g, GridSpec { min: 0.0, max: 2.5, steps: 101 });
        let pts = g.points();
        assert_eq!(pts.len(), 101);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[100], 2.5);
        assert!((pts[40] - 1.0).abs() < 1e-15);
        assert!("1:0:5".parse::<GridSpec>().is_err());
        assert!("0:1:0".parse::<GridSpec>().is_err());
        assert!("0:1".parse::<GridSpec>().is_err());
        assert!("a:1:2".parse::<GridSpec>().is_err());
        assert_eq!("3:3:1".parse::<GridSpec>().unwrap().points(), vec![3.0]);
    }

    #[test]
    fn task_order_is_omega_outer() {
        let cfg = SweepConfig {
            j_c: GridSpec::new(0.0, 1.0, 2).unwrap(),
            omega_c: GridSpec::new(1.0, 2.0, 2).unwrap(),
            ..SweepConfig::default()
        };
        let tasks = cfg.tasks();
        assert_eq!(tasks.len(), 8);
        assert_eq!(tasks[0], (0.0, 1.0, Dynamics::Pme));
        assert_eq!(tasks[1], (0.0, 1.0, Dynamics::Mme));
        assert_eq!(tasks[2], (1.0, 1.0, Dynamics::Pme));
        assert_eq!(tasks[4], (0.0, 2.0, Dynamics::Pme));
    }

    #[test]
    fn config_validation() {
        let mut cfg = SweepConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.gamma = 0.0;
        assert!(cfg.validate().is_err());
        cfg.model = Model::Mme;
        assert!(cfg.validate().is_err());
        cfg.gamma = 1e-3;
        cfg.omega0 = -1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn decoupled_point_is_exactly_unentangled() {
        let cfg = SweepConfig {
            j: 0.0,
            ..SweepConfig::default()
        };
        for row in compute_rows_sequential(&cfg) {
            let r = row.resources().unwrap();
            assert_eq!((r.concurrence, r.steering, r.bell), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn failed_rows_leave_measures_blank() {
        let row = SweepRow {
            j_c: 0.5,
            omega_c: 5.0,
            dynamics: Dynamics::Mme,
            outcome: Err("bad, really\nbad".into()),
        };
        let line = row.csv_line();
        assert_eq!(line.split(',').count(), 10);
        assert!(line.contains(",mme,,,,,,,error: bad; really;bad"));
    }

    #[test]
    fn failure_threshold_is_one_percent() {
        let ok = SweepRow {
            j_c: 0.0,
            omega_c: 5.0,
            dynamics: Dynamics::Pme,
            outcome: Err("x".into()),
        };
        let mut rows = vec![ok.clone(); 100];
        for r in rows.iter_mut().skip(1) {
            r.outcome = compute_rows_sequential(&SweepConfig {
                model: Model::Pme,
                ..SweepConfig::default()
            })[0]
                .outcome
                .clone();
        }
        let one = SweepSummary { rows: rows.clone(), failures: 1 };
        assert!(!one.failed());
        let two = SweepSummary { rows, failures: 2 };
        assert!(two.failed());
    }

    #[test]
    fn csv_header_and_formatting() {
        let cfg = SweepConfig {
            model: Model::Mme,
            ..SweepConfig::default()
        };
        let rows = compute_rows_sequential(&cfg);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields[0], "0.0000000000000000e0");
        assert_eq!(fields[1], "5.0000000000000000e0");
        assert_eq!(fields[2], "mme");
        assert_eq!(fields[9], "ok");
        let e: f64 = fields[3].parse().unwrap();
        assert!((e - 0.1).abs() < 0.02, "{e}");
    }

    #[test]
    fn figure_presets() {
        let f1 = Figure::Fig1.config();
        assert_eq!(f1.model, Model::Mme);
        assert_eq!(f1.j, 0.01);
        assert_eq!((f1.j_c.steps, f1.omega_c.steps), (101, 101));
        let f4 = "4c".parse::<Figure>().unwrap().config();
        assert_eq!(f4.model, Model::Both);
        assert_eq!(f4.j, 1.0);
        assert_eq!(f4.j_c, GridSpec { min: 0.0, max: 5.0, steps: 201 });
        assert_eq!(f4.omega_c, GridSpec::single(5.0));
        assert_eq!("fig2".parse::<Figure>().unwrap(), Figure::Fig2);
        assert!("5".parse::<Figure>().is_err());
    }

    #[test]
    fn plot_script_references_csv_by_name() {
        let mut cfg = Figure::Fig2.config();
        cfg.out = PathBuf::from("/tmp/some/dir/f2.csv");
        let script = plot_script(&cfg, true);
        assert!(script.contains("plot 'f2.csv'"));
        assert!(!script.contains("/tmp"));
        let cfg = Figure::Fig4a.config();
        let script = plot_script(&cfg, false);
        assert!(script.contains("title 'E pme'"));
        assert!(script.contains("title 'N mme'"));
    }

    #[test]
    fn settings_parse_and_override() {
        let file = Settings::parse(
            "# sweep settings\nmodel = mme\nomega0=0.2\njc-range = 0:1:11 # comment\nworkers=2\n",
        )
        .unwrap();
        assert_eq!(file.model, Some(Model::Mme));
        assert_eq!(file.jc_range, Some(GridSpec { min: 0.0, max: 1.0, steps: 11 }));
        let flags = Settings {
            jc: Some(0.3),
            workers: Some(1),
            ..Settings::default()
        };
        let merged = file.overridden_by(&flags);
        let cfg = merged.apply(&SweepConfig::default()).unwrap();
        assert_eq!(cfg.j_c, GridSpec::single(0.3));
        assert_eq!(cfg.workers, 1);
        assert_eq!(cfg.omega0, 0.2);
        assert_eq!(cfg.model, Model::Mme);
        assert!(Settings::parse("bogus = 1").is_err());
        assert!(Settings::parse("omega0").is_err());
        assert!(Settings::parse("omega0 = x").is_err());
    }
}
