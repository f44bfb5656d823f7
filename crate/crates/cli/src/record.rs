//! Line-delimited, self-describing record format for structured output.
//!
//! A record is a sequence of `key=value` lines in a stable order. Keys are
//! lowercase dotted names; values are raw text without newlines. The first
//! line always carries the schema tag. Parsing an emitted record and
//! re-rendering it is byte-identical.

pub const SCHEMA: &str = "quadorders.record.v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(command: &str) -> Self {
        let mut r = Record { fields: Vec::new() };
        r.push("schema", SCHEMA);
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        debug_assert!(!key.contains('=') && !key.contains('\n'));
        debug_assert!(!value.contains('\n'));
        self.fields.push((key.to_string(), value));
    }

    #[cfg(test)]
    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// One `key=value` line per field.
    pub fn render_structured(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.fields {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    /// Two aligned columns for human consumption.
    pub fn render_text(&self) -> String {
        let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.fields {
            out.push_str(&format!("{:width$}  {}\n", k, v, width = width));
        }
        out
    }

    /// Inverse of `render_structured`.
    #[cfg(test)]
    pub fn parse(input: &str) -> Result<Record, String> {
        let mut fields = Vec::new();
        for line in input.lines() {
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("record line without '=': {:?}", line))?;
            fields.push((k.to_string(), v.to_string()));
        }
        if fields.is_empty() {
            return Err("empty record".into());
        }
        Ok(Record { fields })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_byte_identical() {
        let mut r = Record::new("davenport");
        r.push("d", -7);
        r.push("f", 5);
        r.push("value", 6);
        r.push("witness.lower", "0+1*w;0+1*w");
        r.push("provenance", "both-agree");
        let text = r.render_structured();
        let parsed = Record::parse(&text).unwrap();
        assert_eq!(parsed.render_structured(), text);
        assert_eq!(parsed, r);
        assert_eq!(parsed.get("value"), Some("6"));
    }

    #[test]
    fn text_mode_aligns_keys() {
        let mut r = Record::new("member");
        r.push("value", true);
        let text = r.render_text();
        assert!(text.contains("schema   quadorders.record.v1"));
        assert!(text.contains("value    true"));
    }
}
