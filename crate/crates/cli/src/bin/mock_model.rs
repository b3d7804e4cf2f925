//! Test child for the external-model protocol.
//!
//! ```text
//! mock-model echo <i>                 prediction = feature i
//! mock-model linear <b> <w0> <w1>...  prediction = b + Σ w_i x_i
//! mock-model row-index                prediction = position within the batch
//! mock-model short                    answers n − 1 lines, then waits
//! mock-model err                      answers `ERR ...` to the first batch
//! mock-model crash                    exits with status 3 on the first batch
//! mock-model slow <ms> <i>            echo, after sleeping per batch
//! mock-model chatty <i>               echo, plus one stray line per batch
//! mock-model nan                      answers NaN
//! mock-model bad-hello                answers the handshake with garbage
//! ```

use std::io::{self, BufRead, Write};
use std::process::exit;
use std::thread::sleep;
use std::time::Duration;

enum Mode {
    Echo(usize),
    Linear(f64, Vec<f64>),
    RowIndex,
    Short,
    Err,
    Crash,
    Slow(u64, usize),
    Chatty(usize),
    Nan,
    BadHello,
}

fn usage() -> ! {
    eprintln!("usage: mock-model <echo|linear|row-index|short|err|crash|slow|chatty|nan|bad-hello> [args]");
    exit(64)
}

fn num<V: std::str::FromStr>(s: Option<&String>) -> V {
    s.and_then(|s| s.parse().ok()).unwrap_or_else(|| usage())
}

fn parse_mode(args: &[String]) -> Mode {
    match args.first().map(String::as_str) {
        Some("echo") => Mode::Echo(num(args.get(1))),
        Some("linear") => {
            let weights = args[2..].iter().map(|w| num(Some(w))).collect();
            Mode::Linear(num(args.get(1)), weights)
        }
        Some("row-index") => Mode::RowIndex,
        Some("short") => Mode::Short,
        Some("err") => Mode::Err,
        Some("crash") => Mode::Crash,
        Some("slow") => Mode::Slow(num(args.get(1)), num(args.get(2))),
        Some("chatty") => Mode::Chatty(num(args.get(1))),
        Some("nan") => Mode::Nan,
        Some("bad-hello") => Mode::BadHello,
        _ => usage(),
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mode = parse_mode(&args);
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut out = io::stdout().lock();

    let hello = lines.next().and_then(|l| l.ok()).unwrap_or_default();
    let m: usize = match hello.strip_prefix("HELLO ").and_then(|m| m.parse().ok()) {
        Some(m) => m,
        None => {
            eprintln!("mock-model: bad handshake {hello:?}");
            exit(65)
        }
    };
    if let Mode::BadHello = mode {
        writeln!(out, "HI THERE").unwrap();
        out.flush().unwrap();
        exit(0)
    }
    if let Mode::Linear(_, w) = &mode {
        if w.len() != m {
            eprintln!("mock-model: {} weights for {m} features", w.len());
            exit(65)
        }
    }
    writeln!(out, "READY").unwrap();
    out.flush().unwrap();

    while let Some(Ok(header)) = lines.next() {
        let n: usize = match header.strip_prefix("BATCH ").and_then(|n| n.parse().ok()) {
            Some(n) => n,
            None => {
                eprintln!("mock-model: bad batch header {header:?}");
                exit(65)
            }
        };
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines.next().and_then(|l| l.ok()).unwrap_or_default();
            let row: Vec<f64> = line.split(' ').map(|v| v.parse().expect("numeric field")).collect();
            assert_eq!(row.len(), m, "row width");
            rows.push(row);
        }
        match &mode {
            Mode::Echo(i) | Mode::Chatty(i) => {
                for row in &rows {
                    writeln!(out, "{}", row[*i]).unwrap();
                }
                if let Mode::Chatty(_) = mode {
                    writeln!(out, "debug: batch done").unwrap();
                }
            }
            Mode::Slow(ms, i) => {
                sleep(Duration::from_millis(*ms));
                for row in &rows {
                    writeln!(out, "{}", row[*i]).unwrap();
                }
            }
            Mode::Linear(b, w) => {
                for row in &rows {
                    let p = row.iter().zip(w).fold(*b, |acc, (x, w)| acc + x * w);
                    writeln!(out, "{p}").unwrap();
                }
            }
            Mode::RowIndex => {
                for b in 0..n {
                    writeln!(out, "{b}").unwrap();
                }
            }
            Mode::Short => {
                for _ in 1..n {
                    writeln!(out, "0").unwrap();
                }
                out.flush().unwrap();
                sleep(Duration::from_secs(600));
            }
            Mode::Err => writeln!(out, "ERR cannot score this batch").unwrap(),
            Mode::Crash => {
                eprintln!("mock-model: simulated crash");
                exit(3)
            }
            Mode::Nan => {
                for _ in 0..n {
                    writeln!(out, "NaN").unwrap();
                }
            }
            Mode::BadHello => unreachable!(),
        }
        out.flush().unwrap();
    }
}
