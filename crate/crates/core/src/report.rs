//! Deterministic number formatting and a small JSON emitter.
//!
//! Every floating-point number leaves the tool in a fixed
//! 17-significant-digit scientific format, which round-trips any f64
//! losslessly and makes repeated runs byte-identical.

/// 17 significant digits: `d.dddddddddddddddde±exp`.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{:.16e}", x)
}

/// JSON fragments with deterministic key order. Values passed to
/// [`obj`] and [`arr`] must already be rendered JSON.
pub mod json {
    use super::fmt_g17;

    pub fn num(x: f64) -> String {
        // JSON has no NaN/inf; encode them as strings if they ever leak.
        if x.is_finite() {
            fmt_g17(x)
        } else {
            string(&fmt_g17(x))
        }
    }

    pub fn int(x: i64) -> String {
        x.to_string()
    }

    pub fn boolean(x: bool) -> String {
        x.to_string()
    }

    pub fn string(s: &str) -> String {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('"');
        for c in s.chars() {
            match c {
                '"' => out.push_str("\\\""),
                '\\' => out.push_str("\\\\"),
                '\n' => out.push_str("\\n"),
                '\r' => out.push_str("\\r"),
                '\t' => out.push_str("\\t"),
                c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                c => out.push(c),
            }
        }
        out.push('"');
        out
    }

    pub fn arr<I: IntoIterator<Item = String>>(items: I) -> String {
        let mut out = String::from("[");
        for (i, item) in items.into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&item);
        }
        out.push(']');
        out
    }

    pub fn obj(pairs: &[(&str, String)]) -> String {
        let mut out = String::from("{");
        for (i, (k, v)) in pairs.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&string(k));
            out.push(':');
            out.push_str(v);
        }
        out.push('}');
        out
    }
}
