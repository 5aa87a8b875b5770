//! WCNF export and solver-model import.
//!
//! The assumption variables are instantiated with the current syndrome, so
//! the exported formula only mentions switches (`1..=n_switches`) and helpers
//! (the following indices). Each XOR constraint over `k` variables becomes
//! the `2^(k-1)` clauses that forbid its wrong-parity assignments.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

use super::{Assignment, MaxSatInstance};

/// Output dialect.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WcnfDialect {
    /// MaxSAT Evaluation 2022 format: hard clauses prefixed with `h`, no
    /// `p` line.
    #[default]
    Modern,
    /// Pre-2022 format with a `p wcnf` header and hard clauses weighted by
    /// the top weight.
    Legacy,
}

/// Clauses forbidding every assignment of `vars` whose XOR differs from
/// `parity`, as DIMACS literals.
pub(crate) fn xor_to_cnf(vars: &[usize], parity: bool) -> Vec<Vec<i64>> {
    let k = vars.len();
    (0u32..1 << k)
        .filter(|mask| (mask.count_ones() % 2 == 1) != parity)
        .map(|mask| {
            vars.iter()
                .enumerate()
                .map(|(i, &v)| {
                    let lit = v as i64 + 1;
                    if mask >> i & 1 == 1 {
                        -lit
                    } else {
                        lit
                    }
                })
                .collect()
        })
        .collect()
}

impl MaxSatInstance {
    /// Number of variables that appear in exported formulas.
    pub fn n_export_vars(&self) -> usize {
        self.n_switches + self.n_helpers
    }

    /// Hard clauses with the assumption variables fixed to the current
    /// syndrome. A constraint reduced to `0 = 1` yields an empty clause.
    pub fn hard_clauses(&self) -> Vec<Vec<i64>> {
        let first_assumption = self.n_export_vars();
        let mut clauses = Vec::new();
        for con in &self.hard {
            let mut parity = con.parity();
            let mut vars = Vec::with_capacity(3);
            for &v in con.vars() {
                if v >= first_assumption {
                    parity ^= self.assumptions.get(v - first_assumption);
                } else {
                    vars.push(v);
                }
            }
            if vars.is_empty() {
                if parity {
                    clauses.push(Vec::new());
                }
            } else {
                clauses.extend(xor_to_cnf(&vars, parity));
            }
        }
        clauses
    }

    pub fn to_wcnf(&self, dialect: WcnfDialect) -> String {
        let hard = self.hard_clauses();
        let top = self.soft.iter().map(|s| s.weight as u64).sum::<u64>() + 1;
        let mut out = String::new();
        writeln!(
            out,
            "c chained-XOR LightsOut encoding: {} switches, {} helpers, {} lights",
            self.n_switches,
            self.n_helpers,
            self.n_lights()
        )
        .unwrap();
        writeln!(out, "c syndrome {}", self.assumptions).unwrap();
        let hard_prefix = match dialect {
            WcnfDialect::Modern => "h".to_string(),
            WcnfDialect::Legacy => {
                writeln!(out, "p wcnf {} {} {}", self.n_export_vars(), hard.len() + self.soft.len(), top)
                    .unwrap();
                top.to_string()
            }
        };
        for clause in &hard {
            out.push_str(&hard_prefix);
            for lit in clause {
                write!(out, " {lit}").unwrap();
            }
            out.push_str(" 0\n");
        }
        for s in &self.soft {
            writeln!(out, "{} -{} 0", s.weight, s.var + 1).unwrap();
        }
        out
    }

    /// Writes the instance, with `syndrome` loaded, to `path`.
    pub fn export_wcnf(&self, syndrome: &BitVec, path: impl AsRef<Path>, dialect: WcnfDialect) -> Result<()> {
        let mut inst = self.clone();
        inst.set_syndrome(syndrome)?;
        let mut file = fs::File::create(path)?;
        file.write_all(inst.to_wcnf(dialect).as_bytes())?;
        Ok(())
    }

    /// Reads a solver model file and validates it against this instance.
    pub fn import_model(&self, path: impl AsRef<Path>) -> Result<Assignment> {
        self.parse_model(&fs::read_to_string(path)?)
    }

    /// Accepts `v` lines holding either signed DIMACS literals or a single
    /// `0`/`1` string (MaxSAT Evaluation 2022 style). Other lines (`s`, `o`,
    /// `c`) are ignored. Every exported variable must be assigned.
    pub fn parse_model(&self, text: &str) -> Result<Assignment> {
        let n = self.n_export_vars();
        let tokens: Vec<&str> = text
            .lines()
            .filter_map(|l| l.trim_start().strip_prefix('v'))
            .flat_map(str::split_whitespace)
            .collect();
        if tokens.is_empty() {
            return Err(Error::Parse("model has no `v` line".into()));
        }
        let mut assigned: Vec<Option<bool>> = vec![None; n];
        let is_bitstring =
            tokens.len() == 1 && tokens[0].len() > 1 && tokens[0].chars().all(|c| c == '0' || c == '1');
        if is_bitstring {
            for (i, c) in tokens[0].chars().enumerate().take(n) {
                assigned[i] = Some(c == '1');
            }
        } else {
            for tok in tokens {
                let lit: i64 = tok.parse().map_err(|_| Error::Parse(format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    continue;
                }
                let var = lit.unsigned_abs() as usize - 1;
                if var < n {
                    assigned[var] = Some(lit > 0);
                }
            }
        }
        let mut values = BitVec::zeros(self.n_vars());
        for (var, a) in assigned.iter().enumerate() {
            match a {
                Some(v) => values.set(var, *v),
                None => return Err(Error::Parse(format!("model does not assign variable {}", var + 1))),
            }
        }
        for light in 0..self.n_lights() {
            values.set(self.assumption_var(light), self.assumptions.get(light));
        }
        if let Some(constraint) = self.first_violated(&values) {
            return Err(Error::ModelViolatesHard { constraint });
        }
        let objective = self.objective(&values);
        Ok(Assignment { values, objective })
    }
}
