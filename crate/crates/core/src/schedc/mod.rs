//! Line-oriented Hamiltonian schedules (`.bsched`) and their translation from
//! qubit to bosonic-qubit form.
//!
//! ```text
//! # Deutsch oracle f = (0, 1)
//! qubits 2
//! term 1.0 Z1 Z2
//! term 1.0 Z2
//! term -1.0 I
//! evolve pi/4
//! measure 1 x
//! ```
//!
//! Consecutive `term` lines form one Hamiltonian block; each `evolve` applies
//! the most recent block. Parsed schedules are normalized: factors are sorted
//! by site, terms by their first site with identity terms last.

mod parse;

use std::f64::consts::PI;
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

use crate::spin::{operator_product, register_dim, Axis, Operator};
use crate::{Result, C64};

pub use parse::parse_schedule;

/// A value together with the 1-based source line it came from. The line is
/// not part of equality, so reformatted schedules still compare equal.
#[derive(Debug, Clone)]
pub struct Located<T> {
    pub value: T,
    pub line: usize,
}

impl<T> Located<T> {
    pub fn new(value: T, line: usize) -> Self {
        Located { value, line }
    }
}

impl<T: PartialEq> PartialEq for Located<T> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<T> Deref for Located<T> {
    type Target = T;

    fn deref(&self) -> &T {
        &self.value
    }
}

/// `coeff * prod (sigma^axis_site)`; an empty factor list is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleTerm {
    pub coeff: f64,
    pub factors: Vec<(Axis, usize)>,
}

impl ScheduleTerm {
    /// Number of non-identity factors.
    pub fn order(&self) -> usize {
        self.factors.len()
    }
}

/// Evolution time, optionally divided by the bound boson number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeExpr {
    pub base: TimeBase,
    pub over_n: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeBase {
    Decimal(f64),
    /// `pi / k`
    PiOver(u64),
    /// `c * pi`
    PiTimes(f64),
}

impl TimeExpr {
    /// The time with `/N` resolved; `None` if `/N` is present but no `N` is given.
    pub fn evaluate(&self, n_bosons: Option<usize>) -> Option<f64> {
        let base = match self.base {
            TimeBase::Decimal(v) => v,
            TimeBase::PiOver(k) => PI / k as f64,
            TimeBase::PiTimes(c) => c * PI,
        };
        if self.over_n {
            n_bosons.map(|n| base / n as f64)
        } else {
            Some(base)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Hamiltonian(Vec<Located<ScheduleTerm>>),
    Evolve(TimeExpr),
    Measure { site: usize, axis: Axis },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub n_sites: usize,
    /// `None` for an abstract qubit schedule.
    pub n_bosons: Option<usize>,
    pub statements: Vec<Located<Statement>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ScheduleError {
    pub line: usize,
    pub column: usize,
    pub kind: ScheduleErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("site {site} is outside 1..={n_sites}")]
    UnknownSite { site: usize, n_sites: usize },
    #[error("site {0} appears twice in one term")]
    DuplicateSite(usize),
    #[error("term of order {0} has no bosonic translation (at most pairwise products)")]
    Order(usize),
    #[error("schedule is already compiled: {0}")]
    AlreadyCompiled(String),
    #[error("evolve before any term")]
    NoHamiltonian,
}

impl ScheduleError {
    pub(crate) fn new(line: usize, column: usize, kind: ScheduleErrorKind) -> Self {
        ScheduleError { line, column, kind }
    }
}

fn write_f64(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    // Debug gives the shortest string that parses back to the same value
    write!(f, "{v:?}")
}

impl fmt::Display for TimeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            TimeBase::Decimal(v) => write_f64(f, v)?,
            TimeBase::PiOver(k) => write!(f, "pi/{k}")?,
            TimeBase::PiTimes(1.0) => f.write_str("pi")?,
            TimeBase::PiTimes(c) => {
                write_f64(f, c)?;
                f.write_str("*pi")?;
            }
        }
        if self.over_n {
            f.write_str("/N")?;
        }
        Ok(())
    }
}

impl fmt::Display for ScheduleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("term ")?;
        write_f64(f, self.coeff)?;
        if self.factors.is_empty() {
            return f.write_str(" I");
        }
        for (axis, site) in &self.factors {
            let a = match axis {
                Axis::X => 'X',
                Axis::Y => 'Y',
                Axis::Z => 'Z',
            };
            write!(f, " {a}{site}")?;
        }
        Ok(())
    }
}

/// Normalized text: one statement per line, lowercase keywords.
impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_sites)?;
        if let Some(n) = self.n_bosons {
            writeln!(f, "bosons {n}")?;
        }
        for st in &self.statements {
            match &st.value {
                Statement::Hamiltonian(terms) => {
                    for t in terms {
                        writeln!(f, "{}", t.value)?;
                    }
                }
                Statement::Evolve(t) => writeln!(f, "evolve {t}")?,
                Statement::Measure { site, axis } => writeln!(f, "measure {site} {axis}")?,
            }
        }
        Ok(())
    }
}

/// Normalized schedule text.
pub fn pretty_print(schedule: &Schedule) -> String {
    schedule.to_string()
}

/// Qubit-to-bosonic translation: coefficients gain `N^(2 - order)` and every
/// evolution time is divided by `N`.
pub fn compile_to_bosonic(
    schedule: &Schedule,
    n_bosons: usize,
) -> std::result::Result<Schedule, ScheduleError> {
    if schedule.n_bosons.is_some() {
        return Err(ScheduleError::new(
            1,
            1,
            ScheduleErrorKind::AlreadyCompiled("boson number already bound".into()),
        ));
    }
    if n_bosons < 1 {
        return Err(ScheduleError::new(
            1,
            1,
            ScheduleErrorKind::Syntax("boson number must be at least 1".into()),
        ));
    }
    let n = n_bosons as f64;
    let mut statements = Vec::with_capacity(schedule.statements.len());
    for st in &schedule.statements {
        let value = match &st.value {
            Statement::Hamiltonian(terms) => {
                let mut out = Vec::with_capacity(terms.len());
                for t in terms {
                    let order = t.order();
                    if order > 2 {
                        return Err(ScheduleError::new(
                            t.line,
                            1,
                            ScheduleErrorKind::Order(order),
                        ));
                    }
                    out.push(Located::new(
                        ScheduleTerm {
                            coeff: t.coeff * n.powi(2 - order as i32),
                            factors: t.factors.clone(),
                        },
                        t.line,
                    ));
                }
                Statement::Hamiltonian(out)
            }
            Statement::Evolve(t) => {
                if t.over_n {
                    return Err(ScheduleError::new(
                        st.line,
                        1,
                        ScheduleErrorKind::AlreadyCompiled(format!(
                            "time {t} is already divided by N"
                        )),
                    ));
                }
                Statement::Evolve(TimeExpr {
                    base: t.base,
                    over_n: true,
                })
            }
            other => other.clone(),
        };
        statements.push(Located::new(value, st.line));
    }
    Ok(Schedule {
        n_sites: schedule.n_sites,
        n_bosons: Some(n_bosons),
        statements,
    })
}

/// One executable step of a realized schedule.
#[derive(Debug, Clone)]
pub enum Step {
    Evolve { hamiltonian: Operator, time: f64 },
    Measure { site: usize, axis: Axis },
}

fn block_operator(
    terms: &[Located<ScheduleTerm>],
    n_sites: usize,
    n_bosons: usize,
) -> Result<Operator> {
    let dim = register_dim(n_bosons, n_sites)?;
    let mut acc = Operator::zeros(dim);
    for t in terms {
        let op = if t.factors.is_empty() {
            Operator::identity(dim)
        } else {
            operator_product(&t.factors, n_sites, n_bosons)?
        };
        acc = acc.add(&op.scaled(C64::new(t.coeff, 0.0)))?;
    }
    Ok(acc)
}

/// Materializes every block and time of a schedule with bound bosons.
pub fn realize_steps(schedule: &Schedule) -> Result<Vec<Step>> {
    let n = schedule.n_bosons.ok_or_else(|| {
        ScheduleError::new(
            1,
            1,
            ScheduleErrorKind::Syntax("schedule has no `bosons` line; compile it first".into()),
        )
    })?;
    register_dim(n, schedule.n_sites)?;
    let mut current: Option<Operator> = None;
    let mut steps = Vec::new();
    for st in &schedule.statements {
        match &st.value {
            Statement::Hamiltonian(terms) => {
                current = Some(block_operator(terms, schedule.n_sites, n)?);
            }
            Statement::Evolve(t) => {
                let hamiltonian = current.clone().ok_or_else(|| {
                    ScheduleError::new(st.line, 1, ScheduleErrorKind::NoHamiltonian)
                })?;
                let time = t.evaluate(Some(n)).expect("bosons are bound");
                steps.push(Step::Evolve { hamiltonian, time });
            }
            Statement::Measure { site, axis } => steps.push(Step::Measure {
                site: *site,
                axis: *axis,
            }),
        }
    }
    Ok(steps)
}

/// The `(H, t)` pairs of a schedule with bound bosons, in order.
pub fn realize(schedule: &Schedule) -> Result<Vec<(Operator, f64)>> {
    Ok(realize_steps(schedule)?
        .into_iter()
        .filter_map(|s| match s {
            Step::Evolve { hamiltonian, time } => Some((hamiltonian, time)),
            Step::Measure { .. } => None,
        })
        .collect())
}
