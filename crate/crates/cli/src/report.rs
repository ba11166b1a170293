//! `key: value` reports with an optional JSON rendering.

use maxlin2::format::format_rational;
use maxlin2::linsystem::{Assignment, Sign};
use maxlin2::Weight;
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

#[derive(Debug, Default)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Self::default();
        r.text("command", command);
        r
    }

    pub fn text(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.put(key, Value::String(value.into()))
    }

    pub fn int(&mut self, key: &str, value: impl Into<u64>) -> &mut Self {
        self.put(key, Value::from(value.into()))
    }

    pub fn flag(&mut self, key: &str, value: bool) -> &mut Self {
        self.put(key, Value::Bool(value))
    }

    /// Integers render as numbers, other rationals as `"p/q"` strings.
    pub fn rational(&mut self, key: &str, value: &Weight) -> &mut Self {
        let v = if value.is_integer() {
            value
                .to_integer()
                .to_i64()
                .map(Value::from)
                .unwrap_or_else(|| Value::String(format_rational(value)))
        } else {
            Value::String(format_rational(value))
        };
        self.put(key, v)
    }

    /// Signs keyed by name, in variable order.
    pub fn signs<'a>(&mut self, key: &str, names: impl IntoIterator<Item = &'a str>, values: &[Sign]) -> &mut Self {
        let map: Map<String, Value> = names
            .into_iter()
            .zip(values)
            .map(|(n, s)| (n.to_string(), Value::from(s.to_i32())))
            .collect();
        self.put(key, Value::Object(map))
    }

    pub fn assignment(&mut self, key: &str, names: &[String], x: &Assignment) -> &mut Self {
        self.signs(key, names.iter().map(String::as_str), x.values())
    }

    fn put(&mut self, key: &str, value: Value) -> &mut Self {
        debug_assert!(self.entries.iter().all(|(k, _)| k != key), "duplicate key {key}");
        self.entries.push((key.to_string(), value));
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let map: Map<String, Value> = self.entries.iter().cloned().collect();
            let mut out = Value::Object(map).to_string();
            out.push('\n');
            return out;
        }
        let mut out = String::new();
        for (key, value) in &self.entries {
            out.push_str(key);
            out.push(':');
            let rendered = render_value(value);
            if !rendered.is_empty() {
                out.push(' ');
                out.push_str(&rendered);
            }
            out.push('\n');
        }
        out
    }
}

fn render_value(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v.as_i64() {
                Some(1) => format!("{k}=+1"),
                Some(v) => format!("{k}={v}"),
                None => format!("{k}={v}"),
            })
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_share_keys() {
        let mut r = Report::new("demo");
        r.int("n", 3u32)
            .rational("bound", &Weight::new(7.into(), 2.into()))
            .signs("witness", ["a", "b"], &[Sign::Plus, Sign::Minus]);
        assert_eq!(
            r.render(false),
            "command: demo\nn: 3\nbound: 7/2\nwitness: a=+1 b=-1\n"
        );
        assert_eq!(
            r.render(true),
            "{\"command\":\"demo\",\"n\":3,\"bound\":\"7/2\",\"witness\":{\"a\":1,\"b\":-1}}\n"
        );
    }
}
