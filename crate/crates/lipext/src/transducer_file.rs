//! Plain-text transducers.
//!
//! ```text
//! # pairs (a, b) of the source are read as one target symbol 2 (a - 1) + b
//! symbols 2 4
//! states 3
//! initial 0
//! 0, 1 -> 1,
//! 0, 2 -> 2,
//! 1, 1 -> 0, 1
//! 1, 2 -> 0, 2
//! 2, 1 -> 0, 3
//! 2, 2 -> 0, 4
//! ```
//!
//! `symbols` gives the source and target alphabet sizes. Each row reads
//! `state, symbol -> next, output` where the output is a comma separated
//! word, possibly empty. `→` may replace `->`. The domain `E'` comes from
//! the scenario.

use std::fmt::Write as _;

use lipext_core::{AddressTransducer, SymbolicSubset, Word};

use crate::error::{HarnessError, Result};

fn number<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.trim().parse().map_err(|_| HarnessError::Input(format!("line {line}: expected a number, got `{}`", s.trim())))
}

pub fn parse_transducer(text: &str, domain: SymbolicSubset) -> Result<AddressTransducer> {
    let (mut symbols, mut states, mut initial) = (None, None, None);
    let mut rows = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut head = line.split_whitespace();
        match head.next() {
            Some("symbols") => {
                let (a, b) = (head.next(), head.next());
                match (a, b, head.next()) {
                    (Some(a), Some(b), None) => symbols = Some((number::<usize>(a, line_no)?, number::<usize>(b, line_no)?)),
                    _ => return Err(HarnessError::Input(format!("line {line_no}: `symbols <source> <target>`"))),
                }
            }
            Some("states") => states = Some(number::<usize>(line["states".len()..].trim(), line_no)?),
            Some("initial") => initial = Some(number::<usize>(line["initial".len()..].trim(), line_no)?),
            _ => {
                let line = line.replace('→', "->");
                let (lhs, rhs) = line
                    .split_once("->")
                    .ok_or_else(|| HarnessError::Input(format!("line {line_no}: expected `state, symbol -> next, output`")))?;
                let (state, symbol) = lhs
                    .split_once(',')
                    .ok_or_else(|| HarnessError::Input(format!("line {line_no}: expected `state, symbol`")))?;
                let (next, output) = match rhs.split_once(',') {
                    Some((next, output)) => (next, output),
                    None => (rhs, ""),
                };
                let output: Word = output
                    .parse()
                    .map_err(|e| HarnessError::Input(format!("line {line_no}: {e}")))?;
                rows.push((number(state, line_no)?, number(symbol, line_no)?, number(next, line_no)?, output));
            }
        }
    }
    let (src, dst) = symbols.ok_or_else(|| HarnessError::Input("missing `symbols` line".into()))?;
    let states = states.ok_or_else(|| HarnessError::Input("missing `states` line".into()))?;
    AddressTransducer::new(src, dst, states, initial.unwrap_or(0), &rows, domain)
        .map_err(|e| HarnessError::Input(format!("transducer: {e}")))
}

/// Inverse of [`parse_transducer`], rows ordered by state then symbol.
pub fn format_transducer(t: &AddressTransducer) -> String {
    let mut out = String::new();
    writeln!(out, "symbols {} {}", t.source_symbols(), t.target_symbols()).unwrap();
    writeln!(out, "states {}", t.n_states()).unwrap();
    writeln!(out, "initial {}", t.initial()).unwrap();
    for (state, symbol, tr) in t.rows() {
        writeln!(out, "{state}, {symbol} -> {}, {}", tr.next, tr.output).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const GROUPING: &str = "symbols 2 4\nstates 3\ninitial 0\n0, 1 -> 1,\n0, 2 -> 2\n1, 1 -> 0, 1\n1, 2 → 0, 2\n2, 1 -> 0, 3 # c\n2, 2 -> 0, 4\n";

    #[test]
    fn parses_the_grouping() {
        let t = parse_transducer(GROUPING, SymbolicSubset::whole()).unwrap();
        let built = AddressTransducer::grouping(2, SymbolicSubset::whole()).unwrap();
        for w in Word::all_of_length(2, 6) {
            assert_eq!(t.apply(&w).unwrap(), built.apply(&w).unwrap());
        }
    }

    #[test]
    fn round_trip() {
        let t = parse_transducer(GROUPING, SymbolicSubset::whole()).unwrap();
        let again = parse_transducer(&format_transducer(&t), SymbolicSubset::whole()).unwrap();
        assert_eq!(format_transducer(&again), format_transducer(&t));
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_transducer("symbols 2 2\nstates 1\n0, x -> 0, 1\n", SymbolicSubset::whole()).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse_transducer("states 1\n", SymbolicSubset::whole()).is_err());
        // symbol 2 has no transition: the domain is not readable
        assert!(parse_transducer("symbols 2 2\nstates 1\n0, 1 -> 0, 1\n", SymbolicSubset::whole()).is_err());
    }
}
