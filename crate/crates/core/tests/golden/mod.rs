//! Printed 16-level matrices, transcribed entry by entry.
//!
//! Symbolic entries are sums of terms `[±][coefficient]symbol` where the
//! coefficient is an integer or `√3` and the symbol is one of `Δ1 Δ2 Ω1 Ω2`
//! or a lab coupling `V12 V23 V34 V14`.

#![allow(dead_code)]

use std::collections::HashMap;

/// Numerators of the 16×16 frame; the matrix is these over 2.
pub const W16: [[i8; 16]; 16] = [
    [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, -1, 0],
    [1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1],
    [0, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, -1, -1, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, -1, 0, 0],
    [0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0],
    [1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1],
];

pub const H_TP: [[&str; 16]; 16] = [
    ["3V14", "√3Ω2", "0", "0", "√3Ω1", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["√3Ω2", "3Δ1+Δ2", "2Ω2", "0", "0", "√3Ω1", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "2Ω2", "3Δ1-Δ2", "√3Ω2", "0", "0", "√3Ω1", "0", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "√3Ω2", "3V23", "0", "0", "0", "√3Ω1", "0", "0", "0", "0", "0", "0", "0", "0"],
    ["√3Ω1", "0", "0", "0", "Δ1+3Δ2", "√3Ω2", "0", "0", "2Ω1", "0", "0", "0", "0", "0", "0", "0"],
    ["0", "√3Ω1", "0", "0", "√3Ω2", "V14", "2Ω2", "0", "0", "2Ω1", "0", "0", "0", "0", "0", "0"],
    ["0", "0", "√3Ω1", "0", "0", "2Ω2", "V23", "√3Ω2", "0", "0", "2Ω1", "0", "0", "0", "0", "0"],
    ["0", "0", "0", "√3Ω1", "0", "0", "√3Ω2", "Δ1-3Δ2", "0", "0", "0", "2Ω1", "0", "0", "0", "0"],
    ["0", "0", "0", "0", "2Ω1", "0", "0", "0", "3Δ2-Δ1", "√3Ω2", "0", "0", "√3Ω1", "0", "0", "0"],
    ["0", "0", "0", "0", "0", "2Ω1", "0", "0", "√3Ω2", "-V23", "2Ω2", "0", "0", "√3Ω1", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "2Ω1", "0", "0", "2Ω2", "-V14", "√3Ω2", "0", "0", "√3Ω1", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "2Ω1", "0", "0", "√3Ω2", "-Δ1-3Δ2", "0", "0", "0", "√3Ω1"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "√3Ω1", "0", "0", "0", "-3V23", "√3Ω2", "0", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "0", "√3Ω1", "0", "0", "√3Ω2", "Δ2-3Δ1", "2Ω2", "0"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "√3Ω1", "0", "0", "2Ω2", "-3Δ1-Δ2", "√3Ω2"],
    ["0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "0", "√3Ω1", "0", "0", "√3Ω2", "-3V14"],
];

pub const H_LAB: [[&str; 16]; 16] = [
    ["0", "√3V12", "0", "V12", "0", "2V14", "0", "0", "0", "-V12", "0", "0", "0", "0", "0", "V14"],
    ["√3V12", "0", "V12", "0", "2V14", "0", "0", "0", "V34", "0", "0", "0", "0", "0", "V23", "0"],
    ["0", "V12", "0", "√3V12", "0", "0", "0", "2V23", "0", "0", "0", "V34", "0", "V14", "0", "0"],
    ["V12", "0", "√3V12", "0", "0", "0", "2V23", "0", "0", "0", "-V12", "0", "V23", "0", "0", "0"],
    ["0", "2V14", "0", "0", "0", "√3V12", "0", "V34", "0", "0", "0", "V23", "0", "V12", "0", "0"],
    ["2V14", "0", "0", "0", "√3V12", "0", "V34", "0", "0", "0", "V14", "0", "-V34", "0", "0", "0"],
    ["0", "0", "0", "2V23", "0", "V34", "0", "√3V12", "0", "V23", "0", "0", "0", "0", "0", "-V34"],
    ["0", "0", "2V23", "0", "V34", "0", "√3V12", "0", "V14", "0", "0", "0", "0", "0", "V12", "0"],
    ["0", "V34", "0", "0", "0", "0", "0", "V14", "0", "√3V34", "0", "V12", "0", "2V23", "0", "0"],
    ["-V12", "0", "0", "0", "0", "0", "V23", "0", "√3V34", "0", "V12", "0", "2V23", "0", "0", "0"],
    ["0", "0", "0", "-V12", "0", "V14", "0", "0", "0", "V12", "0", "√3V34", "0", "0", "0", "2V14"],
    ["0", "0", "V34", "0", "V23", "0", "0", "0", "V12", "0", "√3V34", "0", "0", "0", "2V14", "0"],
    ["0", "0", "0", "V23", "0", "-V34", "0", "0", "0", "2V23", "0", "0", "0", "√3V34", "0", "V34"],
    ["0", "0", "V14", "0", "V12", "0", "0", "0", "2V23", "0", "0", "0", "√3V34", "0", "V34", "0"],
    ["0", "V23", "0", "0", "0", "0", "0", "V12", "0", "0", "0", "2V14", "0", "V34", "0", "√3V34"],
    ["V14", "0", "0", "0", "0", "0", "-V34", "0", "0", "0", "2V14", "0", "V34", "0", "√3V34", "0"],
];

/// Evaluates one printed entry given values for every symbol it uses.
pub fn eval_entry(entry: &str, symbols: &HashMap<&str, f64>) -> f64 {
    let mut total = 0.0;
    let mut rest = entry;
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'-' => (-1.0, &rest[1..]),
            b'+' => (1.0, &rest[1..]),
            _ => (1.0, rest),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        total += sign * eval_term(&body[..end], symbols);
        rest = &body[end..];
    }
    total
}

fn eval_term(term: &str, symbols: &HashMap<&str, f64>) -> f64 {
    if let Some(sym) = term.strip_prefix("√3") {
        return 3f64.sqrt() * lookup(sym, symbols);
    }
    let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
    let (coeff, sym) = term.split_at(digits);
    let coeff = if coeff.is_empty() { 1.0 } else { coeff.parse::<f64>().unwrap() };
    if sym.is_empty() {
        return coeff;
    }
    coeff * lookup(sym, symbols)
}

fn lookup(sym: &str, symbols: &HashMap<&str, f64>) -> f64 {
    *symbols.get(sym).unwrap_or_else(|| panic!("unknown symbol {sym}"))
}
