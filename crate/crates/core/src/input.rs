//! Input files: tabulated functions on `[0,1]²` and kernel-spec files.
//!
//! A table is tab-separated. The first row holds the `u` coordinates after
//! an ignored corner cell, every following row starts with its `t`
//! coordinate. Off-grid values are bilinear, and points outside the
//! coordinate range are clamped to it.
//!
//! ```text
//! #	0	0.5	1
//! 0	0	0	0
//! 0.5	0	0.25	0.5
//! 1	0	0.5	1
//! ```
//!
//! A kernel-spec file names one kernel and optionally the quadrature:
//!
//! ```text
//! constructed 2 1 47040     # or: xi <path> J beta | table <path> | constant c
//! nodes 24
//! scheme gauss_legendre
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{build_kernel, ConstructedKernel};
use crate::operators::{Evaluator, Kernel};
use crate::quadrature::{QuadratureRule, Scheme};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    t: Vec<f64>,
    u: Vec<f64>,
    /// Row-major, `values[i * u.len() + j]` at `(t[i], u[j])`.
    values: Vec<f64>,
}

fn parse_number(cell: &str, line: usize) -> Result<f64> {
    cell.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}: `{}` is not a number", cell.trim())))
}

fn check_axis(axis: &[f64], name: &str) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::Parse(format!(
            "table needs at least two {name} coordinates"
        )));
    }
    if axis.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(Error::Parse(format!(
            "{name} coordinates must lie in [0, 1]"
        )));
    }
    if axis.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parse(format!(
            "{name} coordinates must be strictly increasing"
        )));
    }
    Ok(())
}

impl Table {
    pub fn new(t: Vec<f64>, u: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_axis(&t, "t")?;
        check_axis(&u, "u")?;
        if values.len() != t.len() * u.len() {
            return Err(Error::Parse(format!(
                "table has {} values for a {}×{} grid",
                values.len(),
                t.len(),
                u.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("table value {v} is not finite")));
        }
        Ok(Self { t, u, values })
    }

    /// Samples `f` on the square grid `coords × coords`.
    pub fn from_fn(coords: Vec<f64>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = coords
            .iter()
            .flat_map(|&t| coords.iter().map(move |&u| (t, u)))
            .map(|(t, u)| f(t, u))
            .collect();
        Self::new(coords.clone(), coords, values)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.trim().is_empty());
        let (header_line, header) = rows
            .next()
            .ok_or_else(|| Error::Parse("empty table".into()))?;
        let u = header
            .split('\t')
            .skip(1)
            .map(|c| parse_number(c, header_line))
            .collect::<Result<Vec<_>>>()?;
        let mut t = Vec::new();
        let mut values = Vec::new();
        for (line, row) in rows {
            let mut cells = row.split('\t');
            t.push(parse_number(cells.next().unwrap_or(""), line)?);
            let before = values.len();
            for cell in cells {
                values.push(parse_number(cell, line)?);
            }
            if values.len() - before != u.len() {
                return Err(Error::Parse(format!(
                    "line {line}: expected {} values, found {}",
                    u.len(),
                    values.len() - before
                )));
            }
        }
        Self::new(t, u, values)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read table {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("#");
        for u in &self.u {
            write!(out, "\t{u}").unwrap();
        }
        out.push('\n');
        for (i, t) in self.t.iter().enumerate() {
            write!(out, "{t}").unwrap();
            for v in &self.values[i * self.u.len()..(i + 1) * self.u.len()] {
                write!(out, "\t{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn t_coords(&self) -> &[f64] {
        &self.t
    }

    pub fn u_coords(&self) -> &[f64] {
        &self.u
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.u.len() + j]
    }

    /// Bilinear interpolation, clamped to the coordinate range.
    pub fn eval(&self, t: f64, u: f64) -> f64 {
        let (i, a) = locate(&self.t, t);
        let (j, b) = locate(&self.u, u);
        let v00 = self.get(i, j);
        let v01 = self.get(i, j + 1);
        let v10 = self.get(i + 1, j);
        let v11 = self.get(i + 1, j + 1);
        (1.0 - a) * ((1.0 - b) * v00 + b * v01) + a * ((1.0 - b) * v10 + b * v11)
    }

    pub fn evaluator(self) -> Evaluator {
        Arc::new(move |t, u| self.eval(t, u))
    }
}

/// Cell index and fractional offset of `x` on a sorted axis.
fn locate(axis: &[f64], x: f64) -> (usize, f64) {
    let last = axis.len() - 1;
    if x <= axis[0] {
        return (0, 0.0);
    }
    if x >= axis[last] {
        return (last - 1, 1.0);
    }
    let i = axis.partition_point(|&c| c <= x) - 1;
    let i = i.min(last - 1);
    (i, (x - axis[i]) / (axis[i + 1] - axis[i]))
}

#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    Constructed {
        n: usize,
        p: usize,
        k: u64,
    },
    /// `exp(J β ξ)` with `ξ` tabulated.
    Xi {
        path: PathBuf,
        coupling: f64,
        beta: f64,
    },
    /// The kernel itself tabulated.
    Table {
        path: PathBuf,
    },
    Constant(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpecFile {
    pub kernel: KernelSpec,
    pub scheme: Scheme,
    pub nodes: usize,
}

pub const DEFAULT_NODES: usize = 32;

fn arity(words: &[&str], want: usize, line: usize) -> Result<()> {
    if words.len() != want + 1 {
        return Err(Error::Parse(format!(
            "line {line}: `{}` takes {want} argument(s), got {}",
            words[0],
            words.len() - 1
        )));
    }
    Ok(())
}

fn parse_word<T: std::str::FromStr>(word: &str, line: usize) -> Result<T> {
    word.parse()
        .map_err(|_| Error::Parse(format!("line {line}: cannot parse `{word}`")))
}

impl KernelSpecFile {
    /// Parses spec text; relative table paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut kernel = None;
        let mut scheme = Scheme::GaussLegendre;
        let mut nodes = DEFAULT_NODES;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            let spec = match words[0] {
                "constructed" => {
                    arity(&words, 3, line)?;
                    KernelSpec::Constructed {
                        n: parse_word(words[1], line)?,
                        p: parse_word(words[2], line)?,
                        k: parse_word(words[3], line)?,
                    }
                }
                "xi" => {
                    arity(&words, 3, line)?;
                    KernelSpec::Xi {
                        path: base.join(words[1]),
                        coupling: parse_word(words[2], line)?,
                        beta: parse_word(words[3], line)?,
                    }
                }
                "table" => {
                    arity(&words, 1, line)?;
                    KernelSpec::Table {
                        path: base.join(words[1]),
                    }
                }
                "constant" => {
                    arity(&words, 1, line)?;
                    KernelSpec::Constant(parse_word(words[1], line)?)
                }
                "nodes" => {
                    arity(&words, 1, line)?;
                    nodes = parse_word(words[1], line)?;
                    continue;
                }
                "scheme" => {
                    arity(&words, 1, line)?;
                    scheme = words[1].parse()?;
                    continue;
                }
                other => {
                    return Err(Error::Parse(format!(
                        "line {line}: unknown directive `{other}`"
                    )))
                }
            };
            if kernel.replace(spec).is_some() {
                return Err(Error::Parse(format!(
                    "line {line}: more than one kernel given"
                )));
            }
        }
        let kernel = kernel.ok_or_else(|| Error::Parse("no kernel line found".into()))?;
        Ok(Self {
            kernel,
            scheme,
            nodes,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Parse(format!("cannot read kernel spec {}: {e}", path.display()))
        })?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn rule(&self) -> Result<Arc<QuadratureRule>> {
        Ok(Arc::new(QuadratureRule::new(self.scheme, self.nodes)?))
    }

    /// Samples the kernel on the configured rule.
    pub fn build(&self) -> Result<BuiltKernel> {
        let rule = self.rule()?;
        let (evaluator, constructed): (Evaluator, _) = match &self.kernel {
            KernelSpec::Constructed { n, p, k } => {
                let c = build_kernel(*n, *p, *k)?;
                (c.evaluator(), Some(c))
            }
            KernelSpec::Xi {
                path,
                coupling,
                beta,
            } => {
                let xi = Table::read(path)?;
                let scale = coupling * beta;
                (Arc::new(move |t, u| (scale * xi.eval(t, u)).exp()), None)
            }
            KernelSpec::Table { path } => (Table::read(path)?.evaluator(), None),
            KernelSpec::Constant(c) => {
                let c = *c;
                (Arc::new(move |_, _| c), None)
            }
        };
        Ok(BuiltKernel {
            kernel: Kernel::new(evaluator, rule)?,
            constructed,
        })
    }
}

pub struct BuiltKernel {
    pub kernel: Kernel,
    pub constructed: Option<ConstructedKernel>,
}
