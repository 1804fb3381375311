use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

/// One JSON document per invocation. Everything except `timing` is a pure
/// function of the arguments and the seed.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub seed: u64,
    /// `"ok"`, or `"violation"` when the command found a counterexample,
    /// a falsified preserver or a failed inequality.
    pub status: Status,
    pub results: Value,
    pub tolerances: Value,
    pub timing: Timing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Violation,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Timing {
    pub elapsed_seconds: f64,
}

/// Pretty printer that writes every float with 17 significant digits.
struct FullPrecision<'a>(PrettyFormatter<'a>);

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl Formatter for FullPrecision<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    forward! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, FullPrecision(PrettyFormatter::new()));
        self.serialize(&mut ser).expect("reports serialize");
        buf.push(b'\n');
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    /// The report with the timing field removed, for replay comparisons.
    pub fn deterministic_part(json: &str) -> Value {
        let mut v: Value = serde_json::from_str(json).expect("valid report");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        v
    }
}
