//! Deterministic report writers. Floats are always rendered with 17
//! significant digits so identical configurations produce byte-identical
//! files and every value reloads exactly.

/// 17 significant digits; round-trips f64 exactly.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Report header: command identity and parameters. The version appears here
/// and never in data rows.
pub struct Meta {
    pub command: &'static str,
    pub potential: String,
    pub beta: String,
}

impl Meta {
    pub fn json(&self) -> String {
        format!(
            "{{\"command\": {}, \"potential\": {}, \"beta\": {}, \"version\": {}}}",
            json_str(self.command),
            json_str(&self.potential),
            self.beta,
            json_str(env!("CARGO_PKG_VERSION")),
        )
    }
}

/// A flat key/index/value table: the CSV rendering of the structured
/// reports.
pub struct LongTable {
    rows: Vec<(String, String, String)>,
}

impl LongTable {
    pub fn new() -> Self {
        LongTable { rows: Vec::new() }
    }

    pub fn scalar(&mut self, key: &str, value: f64) {
        self.rows.push((key.into(), String::new(), fmt_f(value)));
    }

    pub fn text(&mut self, key: &str, value: &str) {
        self.rows.push((key.into(), String::new(), value.into()));
    }

    pub fn indexed(&mut self, key: &str, index: &str, value: f64) {
        self.rows.push((key.into(), index.into(), fmt_f(value)));
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("key,index,value\n");
        for (k, i, v) in &self.rows {
            out.push_str(&format!("{k},{i},{v}\n"));
        }
        out
    }
}

/// Minimal JSON object builder with fixed field order.
pub struct JsonObject {
    fields: Vec<(String, String)>,
}

impl JsonObject {
    pub fn new() -> Self {
        JsonObject { fields: Vec::new() }
    }

    pub fn raw(&mut self, key: &str, value: String) -> &mut Self {
        self.fields.push((key.into(), value));
        self
    }

    pub fn number(&mut self, key: &str, value: f64) -> &mut Self {
        self.raw(key, fmt_f(value))
    }

    pub fn integer(&mut self, key: &str, value: u64) -> &mut Self {
        self.raw(key, value.to_string())
    }

    pub fn string(&mut self, key: &str, value: &str) -> &mut Self {
        self.raw(key, json_str(value))
    }

    pub fn render(&self) -> String {
        let body: Vec<String> = self
            .fields
            .iter()
            .map(|(k, v)| format!("  {}: {}", json_str(k), v))
            .collect();
        format!("{{\n{}\n}}\n", body.join(",\n"))
    }
}

pub fn json_array<T, F: Fn(&T) -> String>(items: &[T], f: F) -> String {
    let parts: Vec<String> = items.iter().map(f).collect();
    format!("[{}]", parts.join(", "))
}
