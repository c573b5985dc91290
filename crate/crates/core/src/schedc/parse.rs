use super::{
    Located, Schedule, ScheduleError, ScheduleErrorKind, ScheduleTerm, Statement, TimeBase,
    TimeExpr,
};
use crate::spin::Axis;

type PResult<T> = std::result::Result<T, ScheduleError>;

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, b))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}

struct Parser {
    n_sites: Option<usize>,
    n_bosons: Option<usize>,
    statements: Vec<Located<Statement>>,
    line: usize,
}

impl Parser {
    fn err(&self, column: usize, kind: ScheduleErrorKind) -> ScheduleError {
        ScheduleError::new(self.line, column, kind)
    }

    fn syntax(&self, column: usize, msg: impl Into<String>) -> ScheduleError {
        self.err(column, ScheduleErrorKind::Syntax(msg.into()))
    }

    fn count(&self, (col, tok): (usize, &str), what: &str) -> PResult<usize> {
        match tok.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(self.syntax(
                col,
                format!("expected a positive integer {what}, found '{tok}'"),
            )),
        }
    }

    fn sites(&self, col: usize) -> PResult<usize> {
        self.n_sites
            .ok_or_else(|| self.syntax(col, "the schedule must start with a `qubits` line"))
    }

    fn site(&self, col: usize, tok: &str) -> PResult<usize> {
        let m = self.sites(col)?;
        let site = tok
            .parse::<usize>()
            .map_err(|_| self.syntax(col, format!("invalid site '{tok}'")))?;
        if site == 0 || site > m {
            return Err(self.err(col, ScheduleErrorKind::UnknownSite { site, n_sites: m }));
        }
        Ok(site)
    }

    fn expect_len(&self, toks: &[(usize, &str)], n: usize, usage: &str) -> PResult<()> {
        if toks.len() != n {
            let col = toks.get(n).or(toks.last()).map_or(1, |t| t.0);
            return Err(self.syntax(col, format!("expected `{usage}`")));
        }
        Ok(())
    }

    fn line(&mut self, toks: &[(usize, &str)]) -> PResult<()> {
        let (kcol, keyword) = toks[0];
        match keyword.to_ascii_lowercase().as_str() {
            "qubits" => {
                if self.n_sites.is_some() {
                    return Err(self.syntax(kcol, "duplicate `qubits` line"));
                }
                self.expect_len(toks, 2, "qubits <INT>")?;
                self.n_sites = Some(self.count(toks[1], "site count")?);
            }
            "bosons" => {
                self.sites(kcol)?;
                if self.n_bosons.is_some() {
                    return Err(self.syntax(kcol, "duplicate `bosons` line"));
                }
                if !self.statements.is_empty() {
                    return Err(self.syntax(kcol, "`bosons` must precede all statements"));
                }
                self.expect_len(toks, 2, "bosons <INT>")?;
                self.n_bosons = Some(self.count(toks[1], "boson number")?);
            }
            "term" => self.term(toks)?,
            "evolve" => {
                self.sites(kcol)?;
                if toks.len() < 2 {
                    return Err(self.syntax(kcol, "expected `evolve <TIME>`"));
                }
                if !self
                    .statements
                    .iter()
                    .any(|s| matches!(s.value, Statement::Hamiltonian(_)))
                {
                    return Err(self.err(kcol, ScheduleErrorKind::NoHamiltonian));
                }
                let text: String = toks[1..].iter().map(|t| t.1).collect();
                let time = self.time(toks[1].0, &text)?;
                self.statements
                    .push(Located::new(Statement::Evolve(time), self.line));
            }
            "measure" => {
                self.sites(kcol)?;
                self.expect_len(toks, 3, "measure <SITE> <x|y|z>")?;
                let site = self.site(toks[1].0, toks[1].1)?;
                let axis = toks[2].1.parse::<Axis>().map_err(|_| {
                    self.syntax(toks[2].0, format!("unknown basis '{}'", toks[2].1))
                })?;
                self.statements
                    .push(Located::new(Statement::Measure { site, axis }, self.line));
            }
            other => return Err(self.syntax(kcol, format!("unknown keyword '{other}'"))),
        }
        Ok(())
    }

    fn term(&mut self, toks: &[(usize, &str)]) -> PResult<()> {
        self.sites(toks[0].0)?;
        if toks.len() < 3 {
            let col = toks.last().map_or(1, |t| t.0);
            return Err(self.syntax(col, "expected `term <COEFF> <FACTOR>+`"));
        }
        let (ccol, ctok) = toks[1];
        let coeff = match ctok.parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ => return Err(self.syntax(ccol, format!("invalid coefficient '{ctok}'"))),
        };
        let mut factors: Vec<(Axis, usize)> = Vec::new();
        for &(col, tok) in &toks[2..] {
            if tok == "I" || tok == "i" {
                continue;
            }
            let mut chars = tok.chars();
            let axis = match chars.next() {
                Some('X' | 'x') => Axis::X,
                Some('Y' | 'y') => Axis::Y,
                Some('Z' | 'z') => Axis::Z,
                _ => return Err(self.syntax(col, format!("invalid factor '{tok}'"))),
            };
            let site = self.site(col + 1, chars.as_str())?;
            if factors.iter().any(|&(_, s)| s == site) {
                return Err(self.err(col, ScheduleErrorKind::DuplicateSite(site)));
            }
            factors.push((axis, site));
        }
        factors.sort_by_key(|&(_, s)| s);
        let term = Located::new(ScheduleTerm { coeff, factors }, self.line);
        match self.statements.last_mut() {
            Some(Located {
                value: Statement::Hamiltonian(terms),
                ..
            }) => terms.push(term),
            _ => self
                .statements
                .push(Located::new(Statement::Hamiltonian(vec![term]), self.line)),
        }
        Ok(())
    }

    fn time(&self, col: usize, text: &str) -> PResult<TimeExpr> {
        let bad = || self.syntax(col, format!("invalid time '{text}'"));
        let (body, over_n) = match text.strip_suffix("/N").or_else(|| text.strip_suffix("/n")) {
            Some(b) => (b, true),
            None => (text, false),
        };
        let positive = |s: &str| match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
            _ => Err(bad()),
        };
        let lower = body.to_ascii_lowercase();
        let base = if lower == "pi" {
            TimeBase::PiTimes(1.0)
        } else if let Some(k) = lower.strip_prefix("pi/") {
            match k.parse::<u64>() {
                Ok(k) if k >= 1 => TimeBase::PiOver(k),
                _ => return Err(bad()),
            }
        } else if let Some(c) = lower.strip_suffix("*pi") {
            TimeBase::PiTimes(positive(c)?)
        } else {
            TimeBase::Decimal(positive(&lower)?)
        };
        Ok(TimeExpr { base, over_n })
    }
}

/// Parses and normalizes `.bsched` text.
pub fn parse_schedule(text: &str) -> PResult<Schedule> {
    let mut p = Parser {
        n_sites: None,
        n_bosons: None,
        statements: Vec::new(),
        line: 0,
    };
    for (i, raw) in text.lines().enumerate() {
        p.line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        if !toks.is_empty() {
            p.line(&toks)?;
        }
    }
    let n_sites = p.n_sites.ok_or_else(|| {
        ScheduleError::new(
            1,
            1,
            ScheduleErrorKind::Syntax("missing `qubits` line".into()),
        )
    })?;
    let mut schedule = Schedule {
        n_sites,
        n_bosons: p.n_bosons,
        statements: p.statements,
    };
    schedule.normalize();
    Ok(schedule)
}

impl Schedule {
    /// Sorts factors by site and terms by first site, identity terms last.
    pub fn normalize(&mut self) {
        for st in &mut self.statements {
            if let Statement::Hamiltonian(terms) = &mut st.value {
                for t in terms.iter_mut() {
                    t.value.factors.sort_by_key(|&(_, s)| s);
                }
                terms.sort_by_key(|t| t.factors.first().map_or(usize::MAX, |&(_, s)| s));
            }
        }
    }
}
