//! Produce a certificate in-process, print it as text, and replay it from
//! disk.

use std::path::Path;

use exlex::cli::{certify, replay};

fn main() {
    let cert = certify("theorem-a", Path::new("fix_a"), None, None, None, 0).unwrap();
    print!("{}", cert.to_text());
    let path = std::env::temp_dir().join("exlex-theorem-a.json");
    std::fs::write(&path, cert.to_json()).unwrap();
    let r = replay(&path).unwrap();
    print!("{}", r.to_text());
}
