//! Rectangular grid sweeps, their CSV form and PPM renderings.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::time::Instant;

use rayon::prelude::*;

use crate::driver::{pfq, EvalOptions, Status};
use crate::hyperterm::HyperParams;
use crate::multifloat::Dd;
use crate::reference::{oracle_pfq, OracleConfig};
use crate::scalar::{cx_from_f64, cx_to_f64, rel_err, Cx};
use crate::{Error, Result};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "HYPERRATAK_THREADS";

pub const CSV_HEADER: [&str; 8] = ["re_z", "im_z", "re_f", "im_f", "k", "seconds", "status", "rel_err"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub rect: Rect,
    pub n_re: usize,
    pub n_im: usize,
}

impl GridSpec {
    pub fn new(rect: Rect, n_re: usize, n_im: usize) -> Result<Self> {
        if n_re == 0 || n_im == 0 {
            return Err(Error::InvalidArgument("grid resolution must be positive".into()));
        }
        let r = rect;
        if !(r.re_min <= r.re_max && r.im_min <= r.im_max) || ![r.re_min, r.re_max, r.im_min, r.im_max].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument("invalid rectangle".into()));
        }
        Ok(GridSpec { rect, n_re, n_im })
    }

    pub fn len(&self) -> usize {
        self.n_re * self.n_im
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point of cell `i`. Cells run in raster order: rows from `im_max` down
    /// to `im_min`, columns from `re_min` to `re_max`. A single sample along
    /// an axis sits at the midpoint.
    pub fn point(&self, i: usize) -> Cx<f64> {
        let (row, col) = (i / self.n_re, i % self.n_re);
        let lin = |lo: f64, hi: f64, j: usize, n: usize| {
            if n == 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * j as f64 / (n - 1) as f64
            }
        };
        let r = &self.rect;
        Cx::new(lin(r.re_min, r.re_max, col, self.n_re), lin(r.im_max, r.im_min, row, self.n_im))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellStatus {
    Converged,
    KMax,
    Overflow,
    Error,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Converged => "converged",
            CellStatus::KMax => "k_max",
            CellStatus::Overflow => "overflow",
            CellStatus::Error => "error",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "converged" => CellStatus::Converged,
            "k_max" => CellStatus::KMax,
            "overflow" => CellStatus::Overflow,
            "error" => CellStatus::Error,
            _ => return Err(Error::InvalidArgument(format!("unknown cell status '{s}'"))),
        })
    }
}

impl From<Status> for CellStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Converged => CellStatus::Converged,
            Status::Overflow => CellStatus::Overflow,
            Status::KMaxReached | Status::Running => CellStatus::KMax,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub z: Cx<f64>,
    pub f: Cx<f64>,
    pub k: usize,
    pub seconds: f64,
    pub status: CellStatus,
    pub rel_err: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct GridJob {
    pub params: HyperParams<f64>,
    pub opts: EvalOptions<f64>,
    pub spec: GridSpec,
    /// Reference values are computed in double-double when set.
    pub oracle: Option<OracleConfig>,
}

/// Pool size: available cores, capped by `HYPERRATAK_THREADS` if set.
pub fn worker_threads() -> usize {
    let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(cap) if cap > 0 => cap.min(cores),
        _ => cores,
    }
}

/// Evaluates one point the way a grid cell does.
pub fn eval_cell(params: &HyperParams<f64>, opts: &EvalOptions<f64>, oracle: Option<&OracleConfig>, z: Cx<f64>) -> Cell {
    let t0 = Instant::now();
    let r = pfq(params, z, opts);
    let seconds = t0.elapsed().as_secs_f64();
    let (f, k, status) = match r {
        Ok(r) => (r.value, r.k, r.status.into()),
        Err(_) => (Cx::new(f64::NAN, f64::NAN), 0, CellStatus::Error),
    };
    let rel_err = oracle.and_then(|cfg| {
        let truth = oracle_pfq::<Dd>(&params.cast(), cx_from_f64(z), cfg).ok()?;
        let truth = cx_to_f64(truth);
        (status != CellStatus::Error).then(|| rel_err(f, truth))
    });
    Cell { z, f, k, seconds, status, rel_err }
}

/// Evaluates every cell on a pool of [`worker_threads`] workers. The output
/// is in cell order regardless of scheduling.
pub fn run_grid(job: &GridJob) -> Result<Vec<Cell>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_threads())
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let cells = pool.install(|| {
        (0..job.spec.len())
            .into_par_iter()
            .map(|i| eval_cell(&job.params, &job.opts, job.oracle.as_ref(), job.spec.point(i)))
            .collect()
    });
    Ok(cells)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

pub fn write_csv<W: Write>(cells: &[Cell], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for c in cells {
        w.write_record([
            fmt_f64(c.z.re),
            fmt_f64(c.z.im),
            fmt_f64(c.f.re),
            fmt_f64(c.f.im),
            c.k.to_string(),
            fmt_f64(c.seconds),
            c.status.as_str().to_string(),
            c.rel_err.map(fmt_f64).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<Cell>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::InvalidArgument("unexpected csv header".into()));
    }
    let num = |s: &str| s.parse::<f64>().map_err(csv_err);
    let mut cells = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != CSV_HEADER.len() {
            return Err(Error::InvalidArgument("short csv record".into()));
        }
        cells.push(Cell {
            z: Cx::new(num(&rec[0])?, num(&rec[1])?),
            f: Cx::new(num(&rec[2])?, num(&rec[3])?),
            k: rec[4].parse().map_err(csv_err)?,
            seconds: num(&rec[5])?,
            status: CellStatus::parse(&rec[6])?,
            rel_err: if rec[7].is_empty() { None } else { Some(num(&rec[7])?) },
        });
    }
    Ok(cells)
}

/// Fully saturated colour of hue `h` in turns: 0 red, 1/3 green, 2/3 blue.
fn hue_rgb(h: f64) -> [u8; 3] {
    let h6 = h.rem_euclid(1.0) * 6.0;
    let x = 1.0 - (h6 % 2.0 - 1.0).abs();
    let (r, g, b) = match h6 as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    let q = |v: f64| (v * 255.0).round() as u8;
    [q(r), q(g), q(b)]
}

fn ppm(width: usize, height: usize, pixels: impl Iterator<Item = [u8; 3]>) -> Vec<u8> {
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend(pixels.flatten());
    out
}

fn check_len(cells: &[Cell], width: usize, height: usize) -> Result<()> {
    if cells.len() != width * height {
        return Err(Error::InvalidArgument(format!("{} cells do not fill {width}x{height}", cells.len())));
    }
    Ok(())
}

/// Phase portrait: hue is `arg f` on an RGB colour wheel, non-finite values
/// are black.
/// `(n_re, n_im)` of cells stored in raster order: the width is the length
/// of the first row of equal `im z`.
pub fn infer_shape(cells: &[Cell]) -> Result<(usize, usize)> {
    let first = cells.first().ok_or_else(|| Error::InvalidArgument("empty grid".into()))?;
    let width = cells.iter().take_while(|c| c.z.im == first.z.im).count();
    if cells.len() % width != 0 {
        return Err(Error::InvalidArgument(format!("{} cells do not form rows of {width}", cells.len())));
    }
    Ok((width, cells.len() / width))
}

pub fn phase_ppm(cells: &[Cell], width: usize, height: usize) -> Result<Vec<u8>> {
    check_len(cells, width, height)?;
    Ok(ppm(
        width,
        height,
        cells.iter().map(|c| {
            if c.f.re.is_finite() && c.f.im.is_finite() {
                hue_rgb(c.f.arg() / (2.0 * PI))
            } else {
                [0, 0, 0]
            }
        }),
    ))
}

/// Relative-error map on a log scale: errors are clamped to `[1e-16, 1]`,
/// white is `1e-16` and black is `1`. Cells without an error are magenta.
pub fn error_ppm(cells: &[Cell], width: usize, height: usize) -> Result<Vec<u8>> {
    check_len(cells, width, height)?;
    Ok(ppm(
        width,
        height,
        cells.iter().map(|c| match c.rel_err {
            Some(e) if !e.is_nan() => {
                let e = e.clamp(1e-16, 1.0);
                let g = (-e.log10() / 16.0 * 255.0).round() as u8;
                [g, g, g]
            }
            _ => [255, 0, 255],
        }),
    ))
}
