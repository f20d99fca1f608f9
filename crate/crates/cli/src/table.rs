//! CSV emission: `#` preamble, header row, round-trip-safe numbers.

use std::fmt::Write;

/// A numeric cell; `None` is written empty.
pub fn num(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.16e}"),
        None => String::new(),
    }
}

pub struct Table {
    text: String,
    columns: usize,
}

impl Table {
    pub fn new(preamble: &[(String, String)], header: &[String]) -> Self {
        let mut text = String::new();
        for (k, v) in preamble {
            let _ = writeln!(text, "# {k} = {v}");
        }
        let _ = writeln!(text, "{}", header.join(","));
        Table { text, columns: header.len() }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.columns);
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn footer(&mut self, line: &str) {
        let _ = writeln!(self.text, "# {line}");
    }

    pub fn into_string(self) -> String {
        self.text
    }
}
