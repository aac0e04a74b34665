//! Typed access to untrusted JSON with JSON-pointer error locations.

use serde_json::{Map, Value};

use crate::error::AppError;

/// Appends one reference token to a JSON pointer, escaping `~` and `/`.
pub fn child(path: &str, token: impl std::fmt::Display) -> String {
    let token = token.to_string().replace('~', "~0").replace('/', "~1");
    format!("{path}/{token}")
}

fn kind(value: &Value) -> &'static str {
    match value {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

fn expected(path: &str, what: &str, value: &Value) -> AppError {
    AppError::schema(path, format!("expected {what}, found {}", kind(value)))
}

pub fn parse(text: &str) -> Result<Value, AppError> {
    serde_json::from_str(text).map_err(|e| {
        AppError::schema("", format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column()))
    })
}

pub fn object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>, AppError> {
    value.as_object().ok_or_else(|| expected(path, "an object", value))
}

/// Rejects keys outside `allowed`, so typos do not pass silently.
pub fn only_keys(map: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<(), AppError> {
    match map.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(key) => Err(AppError::schema(child(path, key), "unknown field")),
        None => Ok(()),
    }
}

pub fn field<'a>(map: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value, AppError> {
    map.get(key)
        .ok_or_else(|| AppError::schema(child(path, key), "missing field"))
}

pub fn array<'a>(value: &'a Value, path: &str) -> Result<&'a [Value], AppError> {
    value
        .as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| expected(path, "an array", value))
}

pub fn string<'a>(value: &'a Value, path: &str) -> Result<&'a str, AppError> {
    value.as_str().ok_or_else(|| expected(path, "a string", value))
}

pub fn boolean(value: &Value, path: &str) -> Result<bool, AppError> {
    value.as_bool().ok_or_else(|| expected(path, "a boolean", value))
}

pub fn number(value: &Value, path: &str) -> Result<f64, AppError> {
    value.as_f64().ok_or_else(|| expected(path, "a number", value))
}

pub fn unsigned(value: &Value, path: &str) -> Result<u64, AppError> {
    value
        .as_u64()
        .ok_or_else(|| expected(path, "a non-negative integer", value))
}

pub fn strings<'a>(value: &'a Value, path: &str) -> Result<Vec<&'a str>, AppError> {
    array(value, path)?
        .iter()
        .enumerate()
        .map(|(i, v)| string(v, &child(path, i)))
        .collect()
}
