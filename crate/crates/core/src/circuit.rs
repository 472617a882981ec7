//! Circuit files.
//!
//! ```text
//! # comments run to the end of the line
//! qubits 3
//! H 1                 # Hadamard on qubit 1
//! ROT 2 pi/4          # rotation, angle defaults to pi/4
//! CNOT 1 2            # control, target (flips target where control is 0)
//! PHASE 3 pi/2        # channel phase; more "channel angle" pairs may follow
//! SWITCH 1 5
//! BSPLIT 2 6          # canonical split, or four phases gamma gamma' delta delta'
//! ```
//!
//! Qubit and channel indices are 1-based. Angles are decimal radians or pi
//! fractions such as `pi/4`, `3pi/2`, `-pi`.

use std::fmt;

use crate::angle::{format_angle, parse_angle};
use crate::compiler::{QubitGate, DEFAULT_ROTATION};
use crate::error::{Error, Result};
use crate::gates::{CorrelationGate, SplitPhases};

/// Largest supported register; `2^MAX_QUBITS` channels.
pub const MAX_QUBITS: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    Qubit(QubitGate),
    Channel(CorrelationGate),
}

impl From<QubitGate> for Instruction {
    fn from(g: QubitGate) -> Self {
        Instruction::Qubit(g)
    }
}

impl From<CorrelationGate> for Instruction {
    fn from(g: CorrelationGate) -> Self {
        Instruction::Channel(g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    mq: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(mq: usize) -> Result<Self> {
        if mq == 0 {
            return Err(Error::TooFewQubits { needed: 1, found: 0 });
        }
        if mq > MAX_QUBITS {
            return Err(Error::QubitOutOfRange {
                qubit: mq,
                n_qubits: MAX_QUBITS,
            });
        }
        Ok(Self {
            mq,
            instructions: Vec::new(),
        })
    }

    /// Channel-level circuit from a lowered gate list.
    pub fn from_gates(mq: usize, gates: impl IntoIterator<Item = CorrelationGate>) -> Result<Self> {
        let mut circuit = Self::new(mq)?;
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    pub fn mq(&self) -> usize {
        self.mq
    }

    pub fn n_channels(&self) -> usize {
        1 << self.mq
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn check(&self, instruction: &Instruction) -> Result<()> {
        match instruction {
            Instruction::Qubit(g) => g.validate(self.mq),
            Instruction::Channel(CorrelationGate::GenericUnitary { .. }) => {
                Err(Error::Unsupported("dense unitaries have no circuit-file form".into()))
            }
            Instruction::Channel(CorrelationGate::PhaseShift { phases }) if phases.is_empty() => {
                Err(Error::Unsupported("phase shift lists no channels".into()))
            }
            Instruction::Channel(g) => g.validate(self.n_channels()),
        }
    }

    pub fn push(&mut self, instruction: impl Into<Instruction>) -> Result<()> {
        let instruction = instruction.into();
        self.check(&instruction)?;
        self.instructions.push(instruction);
        Ok(())
    }

    /// Canonical text form; parsing it gives back an equal circuit.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Qubit(QubitGate::Hadamard { qubit }) => write!(f, "H {qubit}"),
            Instruction::Qubit(QubitGate::Rotation { qubit, delta }) => {
                write!(f, "ROT {qubit} {}", format_angle(*delta))
            }
            Instruction::Qubit(QubitGate::Cnot { control, target }) => write!(f, "CNOT {control} {target}"),
            Instruction::Channel(g) => g.fmt(f),
        }
    }
}

impl fmt::Display for CorrelationGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrelationGate::PhaseShift { phases } => {
                write!(f, "PHASE")?;
                for (ch, gamma) in phases {
                    write!(f, " {ch} {}", format_angle(*gamma))?;
                }
                Ok(())
            }
            CorrelationGate::Switch { a, b } => write!(f, "SWITCH {a} {b}"),
            CorrelationGate::BeamSplit { a, b, phases } if phases.is_canonical() => write!(f, "BSPLIT {a} {b}"),
            CorrelationGate::BeamSplit { a, b, phases } => write!(
                f,
                "BSPLIT {a} {b} {} {} {} {}",
                format_angle(phases.gamma),
                format_angle(phases.gamma_p),
                format_angle(phases.delta),
                format_angle(phases.delta_p)
            ),
            CorrelationGate::GenericUnitary { u } => write!(f, "# dense {}x{} unitary", u.nrows(), u.ncols()),
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.mq)?;
        for instruction in &self.instructions {
            writeln!(f, "{instruction}")?;
        }
        Ok(())
    }
}

pub fn serialize_circuit(circuit: &Circuit) -> String {
    circuit.to_text()
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    tokens
}

struct LineParser<'a> {
    line: usize,
    end_column: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> LineParser<'a> {
    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn at(&self, token: Token<'_>, err: Error) -> Error {
        self.error(token.column, err.to_string())
    }

    fn arity(&self, allowed: &[usize], usage: &str) -> Result<()> {
        let found = self.tokens.len() - 1;
        if allowed.contains(&found) {
            return Ok(());
        }
        let column = if found > *allowed.iter().max().unwrap_or(&0) {
            self.tokens[allowed.iter().max().copied().unwrap_or(0) + 1].column
        } else {
            self.end_column
        };
        Err(self.error(column, format!("expected `{usage}`")))
    }

    fn index(&self, i: usize, what: &str) -> Result<usize> {
        let token = self.tokens[i];
        match token.text.parse::<usize>() {
            Ok(v) if token.text.bytes().all(|b| b.is_ascii_digit()) => Ok(v),
            _ => Err(self.error(token.column, format!("invalid {what} index `{}`", token.text))),
        }
    }

    fn angle(&self, i: usize) -> Result<f64> {
        let token = self.tokens[i];
        parse_angle(token.text).ok_or_else(|| self.error(token.column, format!("invalid angle `{}`", token.text)))
    }

    fn qubit(&self, i: usize, mq: usize) -> Result<usize> {
        let q = self.index(i, "qubit")?;
        if q == 0 || q > mq {
            return Err(self.at(self.tokens[i], Error::QubitOutOfRange { qubit: q, n_qubits: mq }));
        }
        Ok(q)
    }

    fn channel(&self, i: usize, n_channels: usize) -> Result<usize> {
        let ch = self.index(i, "channel")?;
        if ch == 0 || ch > n_channels {
            return Err(self.at(
                self.tokens[i],
                Error::ChannelOutOfRange {
                    channel: ch,
                    n_channels,
                },
            ));
        }
        Ok(ch)
    }

    fn instruction(&self, mq: usize) -> Result<Instruction> {
        let n_channels = 1usize << mq;
        let keyword = self.tokens[0];
        Ok(match keyword.text {
            "H" => {
                self.arity(&[1], "H <qubit>")?;
                QubitGate::Hadamard {
                    qubit: self.qubit(1, mq)?,
                }
                .into()
            }
            "ROT" => {
                self.arity(&[1, 2], "ROT <qubit> [angle]")?;
                let qubit = self.qubit(1, mq)?;
                let delta = if self.tokens.len() == 3 {
                    self.angle(2)?
                } else {
                    DEFAULT_ROTATION
                };
                QubitGate::Rotation { qubit, delta }.into()
            }
            "CNOT" => {
                self.arity(&[2], "CNOT <control> <target>")?;
                if mq < 2 {
                    return Err(self.at(keyword, Error::TooFewQubits { needed: 2, found: mq }));
                }
                let control = self.qubit(1, mq)?;
                let target = self.qubit(2, mq)?;
                if control == target {
                    return Err(self.at(self.tokens[2], Error::RepeatedIndex(target)));
                }
                QubitGate::Cnot { control, target }.into()
            }
            "PHASE" => {
                let pairs = self.tokens.len() - 1;
                if pairs == 0 || pairs % 2 != 0 {
                    let column = if pairs == 0 {
                        self.end_column
                    } else {
                        self.tokens[pairs].column
                    };
                    return Err(self.error(column, "expected `PHASE <channel> <angle> [<channel> <angle> ...]`"));
                }
                let mut phases = std::collections::BTreeMap::new();
                for i in (1..self.tokens.len()).step_by(2) {
                    let ch = self.channel(i, n_channels)?;
                    let gamma = self.angle(i + 1)?;
                    if phases.insert(ch, gamma).is_some() {
                        return Err(self.at(self.tokens[i], Error::RepeatedIndex(ch)));
                    }
                }
                CorrelationGate::PhaseShift { phases }.into()
            }
            "SWITCH" => {
                self.arity(&[2], "SWITCH <channel> <channel>")?;
                let a = self.channel(1, n_channels)?;
                let b = self.channel(2, n_channels)?;
                if a == b {
                    return Err(self.at(self.tokens[2], Error::RepeatedIndex(b)));
                }
                CorrelationGate::switch(a, b).into()
            }
            "BSPLIT" => {
                self.arity(&[2, 6], "BSPLIT <channel> <channel> [gamma gamma' delta delta']")?;
                let a = self.channel(1, n_channels)?;
                let b = self.channel(2, n_channels)?;
                if a == b {
                    return Err(self.at(self.tokens[2], Error::RepeatedIndex(b)));
                }
                let phases = if self.tokens.len() == 7 {
                    let p = SplitPhases {
                        gamma: self.angle(3)?,
                        gamma_p: self.angle(4)?,
                        delta: self.angle(5)?,
                        delta_p: self.angle(6)?,
                    };
                    p.check().map_err(|e| self.at(self.tokens[3], e))?;
                    p
                } else {
                    SplitPhases::CANONICAL
                };
                CorrelationGate::BeamSplit { a, b, phases }.into()
            }
            "qubits" => return Err(self.error(keyword.column, "duplicate `qubits` header")),
            other => return Err(self.error(keyword.column, format!("unknown instruction `{other}`"))),
        })
    }
}

/// Parses circuit text. Errors carry 1-based line and column.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut last_line = 0;
    for (n, raw) in text.split('\n').enumerate() {
        let line_no = n + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if !raw.is_empty() {
            last_line = line_no;
        }
        let body = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(body);
        if tokens.is_empty() {
            continue;
        }
        let parser = LineParser {
            line: line_no,
            end_column: body.trim_end().chars().count() + 1,
            tokens,
        };
        match circuit.as_mut() {
            None => {
                let head = parser.tokens[0];
                if head.text != "qubits" {
                    return Err(parser.error(head.column, "expected `qubits <count>` header"));
                }
                parser.arity(&[1], "qubits <count>")?;
                let mq = parser.index(1, "qubit count")?;
                circuit = Some(Circuit::new(mq).map_err(|e| parser.at(parser.tokens[1], e))?);
            }
            Some(c) => {
                let instruction = parser.instruction(c.mq())?;
                c.push(instruction).map_err(|e| parser.error(1, e.to_string()))?;
            }
        }
    }
    circuit.ok_or(Error::Parse {
        line: last_line.max(1),
        column: 1,
        message: "missing `qubits <count>` header".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn line_of(text: &str) -> usize {
        parse_circuit(text).unwrap_err().line().unwrap()
    }

    #[test]
    fn parses_the_basic_forms() {
        let c = parse_circuit("qubits 2\nH 1\nCNOT 1 2").unwrap();
        assert_eq!(c.mq(), 2);
        assert_eq!(
            c.instructions(),
            &[
                QubitGate::Hadamard { qubit: 1 }.into(),
                QubitGate::Cnot { control: 1, target: 2 }.into()
            ]
        );
        let c = parse_circuit("qubits 3\nROT 2 pi/4").unwrap();
        assert_eq!(
            c.instructions(),
            &[QubitGate::Rotation {
                qubit: 2,
                delta: PI / 4.0
            }
            .into()]
        );
        let c = parse_circuit("qubits 3\nROT 2").unwrap();
        assert_eq!(
            c.instructions(),
            &[QubitGate::Rotation {
                qubit: 2,
                delta: DEFAULT_ROTATION
            }
            .into()]
        );
    }

    #[test]
    fn comments_blank_lines_and_crlf() {
        let c = parse_circuit("# header comment\r\n\r\nqubits 2 # two\r\n  SWITCH 1 4\r\nPHASE 2 -pi/2 3 0.25\r\n")
            .unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(
            c.instructions()[1],
            CorrelationGate::phase_shift([(2, -PI / 2.0), (3, 0.25)]).into()
        );
    }

    #[test]
    fn channel_range_error() {
        let err = parse_circuit("qubits 2\nSWITCH 1 5").unwrap_err();
        assert_eq!(err.line(), Some(2));
        let Error::Parse { column, message, .. } = err else {
            panic!()
        };
        assert_eq!(column, 10);
        assert!(message.contains("channel 5"), "{message}");
    }

    #[test]
    fn explicit_split_phases_are_checked() {
        assert!(parse_circuit("qubits 1\nBSPLIT 1 2 0 0 0 pi").is_ok());
        assert_eq!(line_of("qubits 1\n\nBSPLIT 1 2 0 0 0 0"), 3);
    }

    #[test]
    fn error_lines() {
        assert_eq!(line_of(""), 1);
        assert_eq!(line_of("# nothing\n"), 1);
        assert_eq!(line_of("H 1\nqubits 2"), 1);
        assert_eq!(line_of("qubits 2\nH 1\nFOO 2"), 3);
        assert_eq!(line_of("qubits 2\nH 3"), 2);
        assert_eq!(line_of("qubits 2\nH"), 2);
        assert_eq!(line_of("qubits 2\nCNOT 1 1"), 2);
        assert_eq!(line_of("qubits 1\nCNOT 1 2"), 2);
        assert_eq!(line_of("qubits 2\nROT 1 pi/0"), 2);
        assert_eq!(line_of("qubits 2\nPHASE 1"), 2);
        assert_eq!(line_of("qubits 2\nqubits 3"), 2);
        assert_eq!(line_of("qubits 0"), 1);
        assert_eq!(line_of("qubits 31"), 1);
    }

    #[test]
    fn serialization_is_canonical() {
        let c = parse_circuit("qubits 3\nROT 2 0.7853981633974483\nBSPLIT 1 2\nBSPLIT 3 4 0 0 pi/2 3*pi/2").unwrap();
        assert_eq!(
            c.to_text(),
            "qubits 3\nROT 2 pi/4\nBSPLIT 1 2\nBSPLIT 3 4 0 0 pi/2 3pi/2\n"
        );
        assert_eq!(Circuit::new(4).unwrap().to_text(), "qubits 4\n");
        assert_eq!(parse_circuit(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn push_rejects_dense_and_empty_gates() {
        let mut c = Circuit::new(1).unwrap();
        assert!(c.push(CorrelationGate::phase_shift([])).is_err());
        let id = crate::linalg::CMatrix::identity(2, 2);
        assert!(c.push(CorrelationGate::generic(id).unwrap()).is_err());
    }
}
