//! CSV text with a mandatory header and 17 significant digits per float.

use std::fmt::Write;

pub enum Field<'a> {
    Float(f64),
    Int(u64),
    Flag(bool),
    Text(&'a str),
}

impl Field<'_> {
    fn write(&self, out: &mut String) {
        match self {
            Field::Float(x) => write!(out, "{x:.16e}"),
            Field::Int(n) => write!(out, "{n}"),
            Field::Flag(b) => write!(out, "{}", u8::from(*b)),
            Field::Text(s) => write!(out, "{s}"),
        }
        .expect("writing to a String cannot fail");
    }
}

pub struct Table {
    text: String,
    columns: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { text: header.join(",") + "\n", columns: header.len() }
    }

    /// A `#` line placed before the header.
    pub fn with_preamble(mut self, line: &str) -> Self {
        self.text = format!("# {line}\n{}", self.text);
        self
    }

    pub fn row(&mut self, fields: &[Field]) {
        debug_assert_eq!(fields.len(), self.columns);
        for (i, f) in fields.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            f.write(&mut self.text);
        }
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}
