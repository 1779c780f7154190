use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use flatlex::prelude::*;
use flatlex::render::{self, Template};

/// Builds flat-automaton tokenizers from token specifications.
#[derive(Parser, Debug)]
#[command(name = "flatlex", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a token spec into a classifier file.
    Build {
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Stop after determinization.
        #[arg(long)]
        no_minimize: bool,
        /// Initial partition for minimization.
        #[arg(long, default_value = "by_reachability", value_parser = parse_init)]
        init: InitStrategy,
    },
    /// Print a classifier file in table form.
    Print { automaton: PathBuf },
    /// Split an input file into tokens, one per line: CLASS, byte offset, lexeme.
    Tokenize { automaton: PathBuf, input: PathBuf },
    /// Emit scanner source code for a classifier file.
    Emit {
        automaton: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// `rust` or `c`.
        #[arg(long, default_value = "rust")]
        template: String,
    },
}

fn parse_init(s: &str) -> Result<InitStrategy, String> {
    s.parse()
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_classifier(path: &Path) -> Result<Classifier> {
    render::read_classifier(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

fn build(spec_path: &Path, output: &Path, no_minimize: bool, init: InitStrategy) -> Result<()> {
    let spec = TokenSpec::parse(&read_text(spec_path)?).with_context(|| format!("in {}", spec_path.display()))?;
    for w in spec.warnings() {
        eprintln!("warning: {}: {w}", spec_path.display());
    }
    let nfa = spec.build_classifier()?;
    let dfa = determinize(&nfa)?;
    println!("rules: {}", spec.rules().len());
    println!("nfa states: {}", nfa.len());
    println!("dfa states: {}", dfa.len());
    let result = if no_minimize {
        dfa
    } else {
        let min = minimize(&dfa, init)?;
        let reduction = 100.0 * (dfa.len() - min.len()) as f64 / dfa.len() as f64;
        println!("minimized states: {} ({reduction:.1}% reduction, init {init})", min.len());
        min
    };
    write_text(output, &render::write_classifier(&result))?;
    println!("wrote {}", output.display());
    Ok(())
}

fn escape_lexeme(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out
}

fn tokenize(automaton: &Path, input: &Path) -> Result<()> {
    let c = load_classifier(automaton)?;
    let dfa = Dfa::new(&c)?;
    let text = read_text(input)?;
    let (byte_offsets, chars): (Vec<usize>, Vec<char>) = text.char_indices().unzip();
    let symbols: Vec<Symbol> = chars.iter().map(|&ch| Symbol::from(ch)).collect();
    let mut out = String::new();
    for token in dfa.tokenize(&symbols) {
        let start = byte_offsets[token.start];
        let end = byte_offsets.get(token.start + token.len).copied().unwrap_or(text.len());
        out.push_str(&format!("{}\t{}\t{}\n", token.class, start, escape_lexeme(&text[start..end])));
    }
    print!("{out}");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Build { spec, output, no_minimize, init } => build(&spec, &output, no_minimize, init),
        Command::Print { automaton } => {
            print!("{}", render::print_classifier(&load_classifier(&automaton)?));
            Ok(())
        }
        Command::Tokenize { automaton, input } => tokenize(&automaton, &input),
        Command::Emit { automaton, output, template } => {
            let template: Template = template.parse()?;
            let c = load_classifier(&automaton)?;
            write_text(&output, &render::emit_scanner(&c, template)?)?;
            println!("wrote {}", output.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = e.chain().any(|cause| cause.downcast_ref::<flatlex::Error>().is_some_and(|f| f.is_internal()));
            ExitCode::from(if internal { 2 } else { 1 })
        }
    }
}
