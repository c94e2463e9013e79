use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use natcode::codes::{compare_evidence, parse_code_spec, scan_until_witness, CodeHandle, CodeSpec, EvidenceReport};
use natcode::construct::{dominate, export_text, trace_records, CodeSequence, ConstructConfig, Domination};
use natcode::hierarchy::{Hierarchy, OrdinalCNF};
use natcode::kraft::{assign_codeword, decode_stream, encode_stream, kraft_gap, partial_sum, EncodedStream};
use natcode::numerics::Dyadic;
use natcode::{Error, Nat};
use serde_json::{json, Value};

const DECIMAL_DIGITS: usize = 20;

pub enum Failure {
    Lib(Error),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) => e.exit_code() as u8,
            Failure::Io(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Lib(e) => e.fmt(f),
            Failure::Io(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<u8, Failure>;

const FOUND: u8 = 0;
const NOT_FOUND: u8 = 1;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(io_err(path))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(io_err(path))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write(p, text.as_bytes()),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn dyadic_json(d: &Dyadic) -> Value {
    json!({
        "numerator": d.numerator().to_string(),
        "exponent": d.exponent(),
        "decimal": d.to_decimal(DECIMAL_DIGITS),
    })
}

fn report_text(r: &EvidenceReport) -> String {
    let witness = match &r.witness {
        Some(w) => format!("n = {}, diff = {}", w.n, w.diff),
        None => "none".to_string(),
    };
    format!(
        "{} vs {}\n  scanned 0..={} of horizon {} (gap {})\n  max diff {} at {}\n  min diff {} at {}\n  tail max diff {}\n  witness: {}\n",
        r.code_a, r.code_b, r.scanned, r.horizon, r.gap, r.max_diff, r.max_at, r.min_diff, r.min_at, r.tail_max_diff, witness
    )
}

/// Shift the position of a parse error by `offset` bytes, floored at zero.
fn shift_parse(e: Error, offset: isize) -> Error {
    match e {
        Error::Parse { position, message } => Error::Parse {
            position: position.saturating_add_signed(offset),
            message,
        },
        other => other,
    }
}

/// Split a comma-separated spec list at top-level commas.
fn parse_spec_list(codes: &str) -> Result<Vec<CodeSpec>, Error> {
    const WRAP: &str = "dom(";
    match parse_code_spec(&format!("{WRAP}{codes})")) {
        Ok(CodeSpec::Dom(members)) => Ok(members),
        Ok(_) => unreachable!("a dom(...) wrapper parses to Dom"),
        Err(e) => Err(shift_parse(e, -(WRAP.len() as isize))),
    }
}

pub struct Context {
    pub json: bool,
    pub config: ConstructConfig,
}

impl Context {
    fn build(&self, spec: &str) -> Result<CodeHandle, Error> {
        parse_code_spec(spec)?.build(&self.config)
    }

    fn print(&self, text: String, value: Value) -> Outcome {
        if self.json {
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("JSON values serialize")
            );
        } else {
            print!("{text}");
        }
        Ok(FOUND)
    }

    /// Input codes, the construction, and its code labelled `dom(...)`.
    fn domination(&self, codes: &str) -> Result<(Vec<CodeHandle>, Domination, CodeHandle), Error> {
        let members = parse_spec_list(codes)?
            .iter()
            .map(|s| s.build(&self.config))
            .collect::<Result<Vec<_>, _>>()?;
        let cs = CodeSequence::with_tail(members.clone())?;
        let d = dominate(&cs, &self.config)?;
        let code = d.code().clone().with_spec(format!("dom({})", cs.spec()));
        Ok((members, d, code))
    }

    pub fn lengths(&self, spec: &str, from: &Nat, to: &Nat) -> Outcome {
        let code = self.build(spec)?;
        let mut rows = Vec::new();
        let mut n = from.clone();
        while &n <= to {
            rows.push((n.clone(), code.eval(&n)?));
            n += 1u32;
        }
        let text: String = rows.iter().map(|(n, l)| format!("{n} {l}\n")).collect();
        let value = json!({
            "code": code.spec(),
            "lengths": rows.iter().map(|(n, l)| json!({"n": n.to_string(), "length": l.to_string()})).collect::<Vec<_>>(),
        });
        self.print(text, value)
    }

    pub fn kraft(&self, spec: &str, n: &Nat) -> Outcome {
        let code = self.build(spec)?;
        let gap = kraft_gap(code.lengths(), n)?;
        let sum = partial_sum(code.lengths(), n)?;
        let text = format!(
            "code {}\nn {n}\nsum {sum} ({})\ngap {gap} ({})\n",
            code.spec(),
            sum.to_decimal(DECIMAL_DIGITS),
            gap.to_decimal(DECIMAL_DIGITS)
        );
        let value = json!({
            "code": code.spec(),
            "n": n.to_string(),
            "sum": dyadic_json(&sum),
            "gap": dyadic_json(&gap),
        });
        self.print(text, value)
    }

    pub fn encode(&self, spec: &str, input: &Path, output: &Path) -> Outcome {
        let code = self.build(spec)?;
        let text = String::from_utf8(read(input)?).map_err(|e| Error::Format {
            offset: e.utf8_error().valid_up_to() as u64,
            message: "input is not UTF-8".into(),
        })?;
        let symbols = parse_naturals(&text)?;
        let stream = encode_stream(&code, &symbols)?;
        write(output, &stream.to_bytes()?)?;
        let summary = format!("{} symbols, {} bits\n", symbols.len(), stream.bit_count());
        let value = json!({
            "code": stream.spec(),
            "symbols": symbols.len(),
            "bit_count": stream.bit_count(),
        });
        if self.json {
            self.print(summary, value)
        } else {
            eprint!("{summary}");
            Ok(FOUND)
        }
    }

    pub fn decode(&self, input: &Path, output: Option<&Path>, spec: Option<&str>) -> Outcome {
        let stream = EncodedStream::from_bytes(&read(input)?)?;
        if let Some(spec) = spec {
            let wanted = parse_code_spec(spec)?.to_string();
            let stored = parse_code_spec(stream.spec())?.to_string();
            if wanted != stored {
                return Err(Error::Contract(format!("file is encoded with `{stored}`, not `{wanted}`")).into());
            }
        }
        let symbols = decode_stream(&stream)?;
        if self.json && output.is_none() {
            let value = json!({
                "code": stream.spec(),
                "symbols": symbols.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            return self.print(String::new(), value);
        }
        let text: String = symbols.iter().map(|s| format!("{s}\n")).collect();
        emit(output, &text)?;
        Ok(FOUND)
    }

    pub fn dominate(&self, codes: &str, horizon: u64, gap: &Nat, trace: Option<&Path>) -> Outcome {
        let (members, d, code) = self.domination(codes)?;
        let mut reports = Vec::new();
        let mut failure = None;
        for c in &members {
            match scan_until_witness(&code, c, horizon, gap) {
                Ok(r) => reports.push(r),
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
        }
        if let Some(path) = trace {
            let steps = d.completion.steps();
            let body = if path.extension().is_some_and(|e| e == "json") {
                serde_json::to_string_pretty(&trace_records(&steps)).expect("records serialize") + "\n"
            } else {
                export_text(&steps)
            };
            write(path, body.as_bytes())?;
        }
        let text: String = reports.iter().map(report_text).collect();
        self.print(text, json!(reports))?;
        if let Some(e) = failure {
            return Err(e.into());
        }
        Ok(if reports.iter().all(|r| r.witness.is_some()) {
            FOUND
        } else {
            NOT_FOUND
        })
    }

    fn report(&self, a: &CodeHandle, b: &CodeHandle, horizon: u64, gap: &Nat) -> Outcome {
        let r = compare_evidence(a, b, horizon, gap)?;
        let found = r.witness.is_some();
        self.print(report_text(&r), json!(r))?;
        Ok(if found { FOUND } else { NOT_FOUND })
    }

    pub fn compare(&self, a: &str, b: &str, horizon: u64, gap: &Nat) -> Outcome {
        self.report(&self.build(a)?, &self.build(b)?, horizon, gap)
    }

    pub fn compare_ordinals(&self, a: &str, b: &str, horizon: u64, gap: &Nat) -> Outcome {
        let h = Hierarchy::shared(&self.config);
        let a = h.code(&OrdinalCNF::parse(a)?)?;
        let b = h.code(&OrdinalCNF::parse(b)?)?;
        self.report(&a, &b, horizon, gap)
    }

    pub fn fundamental(&self, ordinal: &str, count: u64) -> Outcome {
        let a = OrdinalCNF::parse(ordinal)?;
        let seq = (0..count).map(|i| a.fundamental(i)).collect::<Result<Vec<_>, _>>()?;
        let text: String = seq.iter().zip(0u64..).map(|(b, i)| format!("{i} {b}\n")).collect();
        let value = json!({
            "ordinal": a.to_string(),
            "fundamental": seq.iter().map(ToString::to_string).collect::<Vec<_>>(),
        });
        self.print(text, value)
    }

    pub fn codewords(&self, spec: &str, from: &Nat, to: &Nat) -> Outcome {
        let code = self.build(spec)?;
        let mut rows = Vec::new();
        let mut n = from.clone();
        while &n <= to {
            rows.push((n.clone(), assign_codeword(&code, &n)?));
            n += 1u32;
        }
        let text: String = rows.iter().map(|(n, w)| format!("{n} {} {w}\n", w.len())).collect();
        let value = json!({
            "code": code.spec(),
            "codewords": rows
                .iter()
                .map(|(n, w)| json!({"n": n.to_string(), "length": w.len(), "bits": w.to_string()}))
                .collect::<Vec<_>>(),
        });
        self.print(text, value)
    }

    pub fn trace(&self, codes: &str, steps: u64, output: Option<&Path>) -> Outcome {
        let (_, d, _) = self.domination(codes)?;
        let ran = d.completion.run_to(steps);
        let executed = d.completion.steps();
        let body = if self.json {
            serde_json::to_string_pretty(&trace_records(&executed)).expect("records serialize") + "\n"
        } else {
            export_text(&executed)
        };
        emit(output, &body)?;
        ran?;
        Ok(FOUND)
    }
}

/// Whitespace-separated decimal naturals; errors carry the byte offset of
/// the offending token.
fn parse_naturals(text: &str) -> Result<Vec<Nat>, Error> {
    let mut out = Vec::new();
    let mut offset = 0usize;
    for token in text.split_ascii_whitespace() {
        let at = offset + text[offset..].find(token).expect("token comes from text");
        offset = at + token.len();
        if !token.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse {
                position: at,
                message: format!("`{token}` is not a decimal natural"),
            });
        }
        out.push(token.parse().expect("digits parse"));
    }
    Ok(out)
}
