//! The bundled example inputs, available without touching the filesystem.

use crate::cli::input::{load_descriptor, CapsSpec, FieldSpec, InputDescriptor, Loaded, Resolver};
use crate::error::{Error, Result};

pub const FILES: &[(&str, &str)] = &[
    ("fix_a.json", include_str!("../fixtures/fix_a.json")),
    ("fix_a.toml", include_str!("../fixtures/fix_a.toml")),
    ("fix_a2.json", include_str!("../fixtures/fix_a2.json")),
    ("fix_p.json", include_str!("../fixtures/fix_p.json")),
    ("fix_t.json", include_str!("../fixtures/fix_t.json")),
    ("fix_t_table.json", include_str!("../fixtures/fix_t_table.json")),
    ("point_table.json", include_str!("../fixtures/point_table.json")),
    ("fix_a_category.json", include_str!("../fixtures/fix_a_category.json")),
    ("corrupt_assoc.json", include_str!("../fixtures/corrupt_assoc.json")),
];

pub fn text(name: &str) -> Result<&'static str> {
    let key = if name.contains('.') { name.to_string() } else { format!("{name}.json") };
    FILES.iter().find(|(n, _)| *n == key).map(|(_, t)| *t).ok_or_else(|| Error::UnknownLabel(format!("builtin fixture `{name}`")))
}

pub struct Builtin;

impl Resolver for Builtin {
    fn resolve(&self, name: &str) -> Result<(String, String)> {
        Ok((text(name)?.to_string(), name.to_string()))
    }
}

/// Load a bundled fixture by file name (`fix_t` or `fix_t.json`).
pub fn load(name: &str) -> Result<Loaded> {
    load_with(name, None, None, 0)
}

pub fn load_with(name: &str, field: Option<&FieldSpec>, caps: Option<&CapsSpec>, seed: u64) -> Result<Loaded> {
    let t = text(name)?;
    let full = if name.contains('.') { name.to_string() } else { format!("{name}.json") };
    let d = InputDescriptor::from_text(t, &full)?;
    load_descriptor(d, &full, t, &Builtin, field, caps, seed)
}
