use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::Circuit;
use crate::gate::{GateInstance, GateKind, Unitary, MAX_TOUCHED};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[non_exhaustive]
pub enum Severity {
    Error,
}

/// A problem found in circuit source text. Line and column are 1-based; columns count chars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
        };
        write!(f, "line {}:{}: {}: {}", self.line, self.column, sev, self.message)
    }
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Splits one line into whitespace-separated tokens; `[` and `]` stand alone; `#` ends the line.
fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col0, (byte, ch)) in line.char_indices().enumerate() {
        let column = col0 + 1;
        if ch == '#' {
            if let Some((b, c)) = start.take() {
                tokens.push(Token { text: &line[b..byte], column: c });
            }
            return tokens;
        }
        if ch.is_whitespace() || ch == '[' || ch == ']' {
            if let Some((b, c)) = start.take() {
                tokens.push(Token { text: &line[b..byte], column: c });
            }
            if ch != '[' && ch != ']' {
                continue;
            }
            tokens.push(Token {
                text: &line[byte..byte + 1],
                column,
            });
            continue;
        }
        if start.is_none() {
            start = Some((byte, column));
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token { text: &line[b..], column: c });
    }
    tokens
}

struct LineParser<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    /// Column just past the last token, for "expected ..." at end of line.
    end_column: usize,
}

type Step<T> = core::result::Result<T, ParseDiagnostic>;

impl<'a> LineParser<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        let tokens = tokenize(text);
        let end_column = tokens
            .last()
            .map(|t| t.column + t.text.chars().count())
            .unwrap_or(1);
        Self {
            line,
            tokens,
            pos: 0,
            end_column,
        }
    }

    fn error(&self, column: usize, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            line: self.line,
            column,
            message: message.into(),
            severity: Severity::Error,
        }
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self, what: &str) -> Step<Token<'a>> {
        match self.peek() {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(self.error(self.end_column, alloc::format!("expected {what}"))),
        }
    }

    fn index(&mut self, what: &str) -> Step<(usize, usize)> {
        let tok = self.next(what)?;
        if tok.text.is_empty() || !tok.text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.error(
                tok.column,
                alloc::format!("expected {what}, found '{}'", tok.text),
            ));
        }
        tok.text
            .parse::<usize>()
            .map(|v| (v, tok.column))
            .map_err(|_| self.error(tok.column, alloc::format!("integer '{}' is too large", tok.text)))
    }

    fn number(&mut self, what: &str) -> Step<f64> {
        let tok = self.next(what)?;
        let looks_decimal = !tok.text.is_empty()
            && tok
                .text
                .bytes()
                .all(|b| b.is_ascii_digit() || matches!(b, b'+' | b'-' | b'.' | b'e' | b'E'));
        let value = if looks_decimal {
            tok.text.parse::<f64>().ok()
        } else {
            None
        };
        match value {
            Some(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(
                tok.column,
                alloc::format!("expected {what} (decimal number), found '{}'", tok.text),
            )),
        }
    }

    fn finish(&self) -> Step<()> {
        match self.peek() {
            Some(t) => Err(self.error(t.column, alloc::format!("unexpected token '{}'", t.text))),
            None => Ok(()),
        }
    }
}

/// Parses the text format. Returns either a circuit or a nonempty diagnostic list, never both.
pub fn parse_circuit(text: &str) -> Result<Circuit, Vec<ParseDiagnostic>> {
    let mut diags = Vec::new();
    let mut n: Option<usize> = None;
    let mut header_missing_reported = false;
    let mut gates = Vec::new();
    let mut seen_statement = false;

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let mut p = LineParser::new(line_no, line);
        let Some(first) = p.peek() else { continue };

        if first.text == "qubits" {
            p.pos += 1;
            let result = (|| {
                if seen_statement {
                    return Err(p.error(
                        first.column,
                        if n.is_some() {
                            "duplicate `qubits` header"
                        } else {
                            "`qubits` header must come before any gate"
                        },
                    ));
                }
                let (count, col) = p.index("qubit count")?;
                if count == 0 {
                    return Err(p.error(col, "qubit count must be at least 1"));
                }
                if count > crate::state::MAX_QUBITS {
                    return Err(p.error(
                        col,
                        alloc::format!("qubit count {count} exceeds {}", crate::state::MAX_QUBITS),
                    ));
                }
                p.finish()?;
                Ok(count)
            })();
            seen_statement = true;
            match result {
                Ok(count) => n = Some(count),
                Err(d) => diags.push(d),
            }
            continue;
        }

        if !seen_statement && !header_missing_reported {
            diags.push(p.error(first.column, "missing `qubits` header"));
            header_missing_reported = true;
        }
        seen_statement = true;
        match parse_gate_line(&mut p, n) {
            Ok(g) => gates.push(g),
            Err(d) => diags.push(d),
        }
    }

    if !seen_statement {
        diags.push(ParseDiagnostic {
            line: 1,
            column: 1,
            message: "missing `qubits` header".to_string(),
            severity: Severity::Error,
        });
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    let mut circuit = match n.map(Circuit::new) {
        Some(Ok(c)) => c,
        _ => unreachable!("header validated above"),
    };
    for g in gates {
        // Indices were range-checked during parsing.
        circuit.push(g).expect("range-checked gate");
    }
    Ok(circuit)
}

/// Byte-level entry point: invalid UTF-8 becomes a diagnostic instead of a failure.
pub fn parse_circuit_bytes(bytes: &[u8]) -> Result<Circuit, Vec<ParseDiagnostic>> {
    match core::str::from_utf8(bytes) {
        Ok(text) => parse_circuit(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            // The valid prefix is UTF-8 by construction.
            let prefix = core::str::from_utf8(valid).unwrap_or("");
            let line = prefix.matches('\n').count() + 1;
            let column = prefix.rsplit('\n').next().map(|s| s.chars().count()).unwrap_or(0) + 1;
            Err(alloc::vec![ParseDiagnostic {
                line,
                column,
                message: "invalid UTF-8".to_string(),
                severity: Severity::Error,
            }])
        }
    }
}

fn parse_gate_line(p: &mut LineParser<'_>, n: Option<usize>) -> Step<GateInstance> {
    let mut controls: Vec<(usize, usize)> = Vec::new();
    let mnemonic = loop {
        let tok = p.next("gate mnemonic")?;
        if tok.text == "ctrl" {
            controls.push(p.index("control qubit index")?);
        } else {
            break tok;
        }
    };

    let kind_and_targets: (GateKind, Vec<(usize, usize)>) = match mnemonic.text {
        "x" | "y" | "z" | "h" | "s" | "t" => {
            let kind = match mnemonic.text {
                "x" => GateKind::X,
                "y" => GateKind::Y,
                "z" => GateKind::Z,
                "h" => GateKind::H,
                "s" => GateKind::S,
                _ => GateKind::T,
            };
            (kind, alloc::vec![p.index("target qubit index")?])
        }
        "cnot" => {
            let c = p.index("control qubit index")?;
            let t = p.index("target qubit index")?;
            (GateKind::Cnot, alloc::vec![c, t])
        }
        "ry" => {
            let theta = p.number("rotation angle")?;
            (GateKind::Ry(theta), alloc::vec![p.index("target qubit index")?])
        }
        "unitary" => {
            let mut targets = Vec::new();
            loop {
                match p.peek() {
                    Some(t) if t.text == "[" => break,
                    Some(_) => targets.push(p.index("target qubit index or '['")?),
                    None => return Err(p.error(p.end_column, "expected '[' starting matrix entries")),
                }
            }
            if targets.is_empty() || targets.len() > 2 {
                return Err(p.error(
                    mnemonic.column,
                    alloc::format!("unitary acts on 1 or 2 qubits, got {}", targets.len()),
                ));
            }
            let open = p.next("'['")?;
            let expected = 2 * (1usize << (2 * targets.len()));
            let mut values = Vec::with_capacity(expected);
            loop {
                match p.peek() {
                    Some(t) if t.text == "]" => {
                        p.pos += 1;
                        break;
                    }
                    Some(_) => values.push(p.number("matrix entry")?),
                    None => return Err(p.error(p.end_column, "expected ']' closing matrix entries")),
                }
            }
            if values.len() != expected {
                return Err(p.error(
                    open.column,
                    alloc::format!(
                        "{}-qubit unitary needs {expected} real numbers (re im pairs), got {}",
                        targets.len(),
                        values.len()
                    ),
                ));
            }
            let entries: Vec<C64> = values.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
            let u = Unitary::new(entries).map_err(|e| p.error(open.column, e.to_string()))?;
            (GateKind::Unitary(u), targets)
        }
        other => {
            return Err(p.error(mnemonic.column, alloc::format!("unknown mnemonic '{other}'")));
        }
    };
    p.finish()?;

    let (kind, targets) = kind_and_targets;
    let touched: Vec<(usize, usize)> = targets.iter().chain(controls.iter()).copied().collect();
    if let Some(n) = n {
        if let Some(&(q, col)) = touched.iter().find(|(q, _)| *q >= n) {
            return Err(p.error(
                col,
                alloc::format!("qubit index {q} out of range (circuit has {n} qubits)"),
            ));
        }
    }
    for (i, &(q, col)) in touched.iter().enumerate() {
        if touched[..i].iter().any(|&(r, _)| r == q) {
            return Err(p.error(
                col,
                alloc::format!("qubit {q} used more than once in one instruction"),
            ));
        }
    }
    if touched.len() > MAX_TOUCHED {
        return Err(p.error(
            mnemonic.column,
            alloc::format!(
                "instruction touches {} qubits; at most {MAX_TOUCHED} allowed",
                touched.len()
            ),
        ));
    }
    GateInstance::new(
        kind,
        targets.into_iter().map(|(q, _)| q).collect(),
        controls.into_iter().map(|(q, _)| q).collect(),
    )
    .map_err(|e| p.error(mnemonic.column, e.to_string()))
}
