//! Plain-text import/export of scenarios and witness certificates.
//!
//! Format (`#` starts a comment, blank lines ignored):
//!
//! ```text
//! dim 4
//! states 7
//! effects 8
//! reduced 7
//! <then one matrix per state, effect and reduced-basis element:
//!  dim rows, each row holding dim "re im" pairs>
//! ```
//!
//! A witness certificate uses the header `witness <len>` followed by one
//! real coefficient per line.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::{HermitianOp, OnticError, OnticScenario};

fn write_op(out: &mut impl Write, op: &HermitianOp) -> std::io::Result<()> {
    let d = op.dim();
    for i in 0..d {
        let mut row = String::new();
        for j in 0..d {
            let z = op.entries()[i * d + j];
            if j > 0 {
                row.push(' ');
            }
            row.push_str(&format!("{:.17e} {:.17e}", z.re, z.im));
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

/// Serialize a scenario to the plain-text matrix-list format.
pub fn write_scenario(out: &mut impl Write, sc: &OnticScenario) -> Result<(), OnticError> {
    let d = sc
        .states
        .first()
        .map(|s| s.dim())
        .or_else(|| sc.effects.first().map(|e| e.dim()))
        .unwrap_or(0);
    writeln!(out, "# cfclock ontic scenario")?;
    writeln!(out, "dim {d}")?;
    writeln!(out, "states {}", sc.states.len())?;
    writeln!(out, "effects {}", sc.effects.len())?;
    writeln!(out, "reduced {}", sc.reduced_basis.len())?;
    for op in sc
        .states
        .iter()
        .chain(&sc.effects)
        .chain(&sc.reduced_basis)
    {
        write_op(out, op)?;
    }
    Ok(())
}

/// Serialize a witness vector in the companion format.
pub fn write_witness(out: &mut impl Write, witness: &[f64]) -> Result<(), OnticError> {
    writeln!(out, "# cfclock witness certificate")?;
    writeln!(out, "witness {}", witness.len())?;
    for v in witness {
        writeln!(out, "{v:.17e}")?;
    }
    Ok(())
}

struct Tokens {
    items: Vec<String>,
    pos: usize,
}

impl Tokens {
    fn next(&mut self) -> Result<&str, OnticError> {
        let t = self
            .items
            .get(self.pos)
            .ok_or_else(|| OnticError::Format("unexpected end of file".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn next_usize(&mut self) -> Result<usize, OnticError> {
        let t = self.next()?;
        t.parse()
            .map_err(|_| OnticError::Format(format!("expected integer, got {t:?}")))
    }

    fn next_f64(&mut self) -> Result<f64, OnticError> {
        let t = self.next()?;
        t.parse()
            .map_err(|_| OnticError::Format(format!("expected number, got {t:?}")))
    }

    fn expect(&mut self, word: &str) -> Result<(), OnticError> {
        let t = self.next()?;
        if t != word {
            return Err(OnticError::Format(format!("expected {word:?}, got {t:?}")));
        }
        Ok(())
    }
}

fn read_op(tokens: &mut Tokens, d: usize) -> Result<HermitianOp, OnticError> {
    let mut entries = Vec::with_capacity(d * d);
    for _ in 0..d * d {
        let re = tokens.next_f64()?;
        let im = tokens.next_f64()?;
        entries.push(Complex64::new(re, im));
    }
    HermitianOp::new(d, entries)
}

/// Parse a scenario from the plain-text format.
pub fn read_scenario(input: &mut impl BufRead) -> Result<OnticScenario, OnticError> {
    let mut items = Vec::new();
    for line in input.lines() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("");
        items.extend(body.split_whitespace().map(str::to_owned));
    }
    let mut tokens = Tokens { items, pos: 0 };
    tokens.expect("dim")?;
    let d = tokens.next_usize()?;
    tokens.expect("states")?;
    let ns = tokens.next_usize()?;
    tokens.expect("effects")?;
    let ne = tokens.next_usize()?;
    tokens.expect("reduced")?;
    let nr = tokens.next_usize()?;
    let mut read_block = |n: usize| -> Result<Vec<HermitianOp>, OnticError> {
        (0..n).map(|_| read_op(&mut tokens, d)).collect()
    };
    let states = read_block(ns)?;
    let effects = read_block(ne)?;
    let reduced_basis = read_block(nr)?;
    Ok(OnticScenario {
        states,
        effects,
        reduced_basis,
        experimental: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontic::{build_scenario, find_witness, ScenarioMode};
    use crate::synth::um_nt1_canonical;

    #[test]
    fn scenario_round_trip() {
        let spec = um_nt1_canonical();
        let sc = build_scenario(&spec, ScenarioMode::Counterfactual).unwrap();
        let mut buf = Vec::new();
        write_scenario(&mut buf, &sc).unwrap();
        let parsed = read_scenario(&mut buf.as_slice()).unwrap();
        assert_eq!(parsed.states.len(), sc.states.len());
        assert_eq!(parsed.effects.len(), sc.effects.len());
        assert_eq!(parsed.reduced_basis.len(), sc.reduced_basis.len());
        // the parsed scenario reproduces the witness verdict
        let report = find_witness(&parsed).unwrap();
        assert!(!report.model_exists);
    }

    #[test]
    fn malformed_header_rejected() {
        let text = "dim 2\nstates nope\n";
        let err = read_scenario(&mut text.as_bytes()).unwrap_err();
        assert!(matches!(err, OnticError::Format(_)));
    }
}
