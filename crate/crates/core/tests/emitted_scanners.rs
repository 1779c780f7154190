//! Compiles generated scanners with the system toolchain and compares them
//! with the in-process tokenizer.

mod common;

use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

use common::*;
use flatlex::prelude::*;
use flatlex::render::{emit_scanner, Template};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const C_MAIN: &str = r#"
#include <stdio.h>
#include <stdlib.h>

int main(void) {
    static unsigned char buf[1 << 20];
    uint32_t *input;
    size_t n = fread(buf, 1, sizeof buf, stdin), i, pos = 0;
    input = malloc((n + 1) * sizeof *input);
    for (i = 0; i < n; i++)
        input[i] = buf[i];
    while (pos < n) {
        const char *cls;
        size_t len = flat_next_token(input + pos, n - pos, &cls);
        if (len == 0)
            len = 1;
        printf("%s %zu %zu\n", cls, pos, len);
        pos += len;
    }
    free(input);
    return 0;
}
"#;

const RUST_MAIN: &str = r#"
fn main() {
    let mut text = String::new();
    std::io::Read::read_to_string(&mut std::io::stdin(), &mut text).unwrap();
    let input: Vec<u32> = text.chars().map(|c| c as u32).collect();
    for (start, len, class) in tokenize(&input) {
        println!("{class} {start} {len}");
    }
    let (len, class) = next_token(&input);
    println!("first {class} {len}");
}
"#;

fn run_with_input(exe: &Path, input: &[u8]) -> String {
    let mut child = Command::new(exe).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

fn expected(c: &Classifier, input: &[u8]) -> String {
    let symbols: Vec<Symbol> = input.iter().map(|&b| Symbol(b as u32)).collect();
    Dfa::new(c)
        .unwrap()
        .tokenize(&symbols)
        .iter()
        .map(|t| format!("{} {} {}\n", t.class, t.start, t.len))
        .collect()
}

fn compile(cmd: &mut Command) -> bool {
    match cmd.status() {
        Ok(status) => {
            assert!(status.success(), "compiler failed: {cmd:?}");
            true
        }
        Err(e) => {
            eprintln!("skipping: cannot run {cmd:?}: {e}");
            false
        }
    }
}

const SAMPLE: &str = r#"/* header */
int main(void) {
    unsigned long x = 0x1F + 42u, y = 3.5e-2;
    char c = '\n'; const char *s = "a \"quoted\" string";
    // line comment
    while (x-- > 0 && y <= 1.0) { x <<= 2; y /= 3; }
    return x ? y : -1; @ $ `
}
"#;

#[test]
fn c_scanner_matches_tokenizer_on_c_like_spec() {
    let spec = TokenSpec::parse(&bundled_spec("clike.tokspec")).unwrap();
    let dfa = determinize(&spec.build_classifier().unwrap()).unwrap();
    let min = minimize(&dfa, InitStrategy::ByReachability).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("scanner.c");
    let exe = dir.path().join("scanner");
    std::fs::write(&src, emit_scanner(&min, Template::C).unwrap() + C_MAIN).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !compile(Command::new(cc).arg("-O2").arg("-o").arg(&exe).arg(&src)) {
        return;
    }
    let mut inputs: Vec<Vec<u8>> = vec![SAMPLE.as_bytes().to_vec(), Vec::new(), b"\x00\x7f\xff".to_vec()];
    let pool: &[u8] = b" \n\tabfiorwx019_.+-*/=<>!&|\"'\\(){};,xe";
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        inputs.push((0..300).map(|_| *pool.choose(&mut rng).unwrap()).collect());
    }
    for input in &inputs {
        assert_eq!(run_with_input(&exe, input), expected(&min, input));
        assert_eq!(expected(&dfa, input), expected(&min, input));
    }
}

#[test]
fn rust_scanner_for_the_error_classifier() {
    let c = Classifier::error_classifier(Alphabet::ascii(), tc("E"));
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("scanner.rs");
    let exe = dir.path().join("scanner");
    std::fs::write(&src, emit_scanner(&c, Template::Rust).unwrap() + RUST_MAIN).unwrap();
    let rustc = std::env::var("RUSTC").unwrap_or_else(|_| "rustc".into());
    if !compile(Command::new(rustc).arg("--edition=2021").arg("-o").arg(&exe).arg(&src)) {
        return;
    }
    assert_eq!(run_with_input(&exe, b"ab"), "E 0 1\nE 1 1\nfirst E 0\n");
    assert_eq!(run_with_input(&exe, b""), "first E 0\n");
}
