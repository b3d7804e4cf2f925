use std::io::{BufRead, BufReader, Read, Write};
use std::marker::PhantomData;
use std::process::{Child, ChildStdin, Command, ExitStatus, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use ndarray::ArrayView2;

use super::protocol::{decode_prediction, encode_batch, hello_line, ERR_PREFIX, READY};
use super::DEFAULT_BATCH_TIMEOUT;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::scalar::Scalar;

const STDERR_KEEP: usize = 4096;

#[derive(Debug, Clone, Copy)]
pub struct ExecOptions {
    pub serial: bool,
    pub batch_timeout: Duration,
}

impl Default for ExecOptions {
    fn default() -> Self {
        Self { serial: true, batch_timeout: DEFAULT_BATCH_TIMEOUT }
    }
}

struct Session {
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
    /// Set after any failure; the child's stream position is unknown from then on.
    broken: Option<String>,
}

/// A model served by a child process speaking the line protocol in
/// [`super::protocol`]. The child is started once and reused for every batch.
pub struct ExecModel<T> {
    command: Vec<String>,
    n_features: usize,
    options: ExecOptions,
    session: Mutex<Session>,
    stderr_tail: Arc<Mutex<String>>,
    _scalar: PhantomData<fn() -> T>,
}

/// Launches `command` and performs the `HELLO`/`READY` handshake.
pub fn exec_model<T: Scalar>(command: &[String], n_features: usize, options: ExecOptions) -> Result<ExecModel<T>> {
    let (program, args) = command
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("exec model command is empty".into()))?;
    let mut child = Command::new(program)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| Error::ModelContract(format!("failed to launch `{}`: {e}", command.join(" "))))?;

    let stdout = child.stdout.take().expect("piped stdout");
    let (tx, lines) = mpsc::channel();
    thread::spawn(move || {
        for line in BufReader::new(stdout).lines() {
            let stop = line.is_err();
            if tx.send(line).is_err() || stop {
                break;
            }
        }
    });

    let stderr_tail = Arc::new(Mutex::new(String::new()));
    let mut stderr = child.stderr.take().expect("piped stderr");
    let sink = Arc::clone(&stderr_tail);
    thread::spawn(move || {
        let mut buf = [0u8; 1024];
        while let Ok(n) = stderr.read(&mut buf) {
            if n == 0 {
                break;
            }
            let mut tail = sink.lock().unwrap_or_else(|p| p.into_inner());
            tail.push_str(&String::from_utf8_lossy(&buf[..n]));
            if tail.len() > STDERR_KEEP {
                let cut = tail.len() - STDERR_KEEP;
                let cut = (cut..tail.len()).find(|&i| tail.is_char_boundary(i)).unwrap_or(tail.len());
                tail.drain(..cut);
            }
        }
    });

    let stdin = child.stdin.take();
    let model = ExecModel {
        command: command.to_vec(),
        n_features,
        options,
        session: Mutex::new(Session { child, stdin, lines, broken: None }),
        stderr_tail,
        _scalar: PhantomData,
    };
    model.handshake()?;
    Ok(model)
}

impl<T: Scalar> ExecModel<T> {
    fn diagnostics(&self, session: &mut Session) -> String {
        let mut msg = String::new();
        if let Ok(Some(status)) = session.child.try_wait() {
            msg.push_str(&format!("; child exited with {status}"));
        }
        // give the stderr reader a moment to catch up with a dying child
        thread::sleep(Duration::from_millis(20));
        let tail = self.stderr_tail.lock().unwrap_or_else(|p| p.into_inner());
        let tail = tail.trim();
        if !tail.is_empty() {
            msg.push_str(&format!("; child stderr: {tail}"));
        }
        msg
    }

    fn fail(&self, session: &mut Session, what: String) -> Error {
        let full = format!("`{}`: {what}{}", self.command.join(" "), self.diagnostics(session));
        session.broken = Some(full.clone());
        if let Some(stdin) = session.stdin.take() {
            drop(stdin);
        }
        let _ = session.child.kill();
        let _ = session.child.wait();
        Error::ModelContract(full)
    }

    fn send(&self, session: &mut Session, text: &str) -> Result<()> {
        let written = match session.stdin.as_mut() {
            Some(stdin) => stdin.write_all(text.as_bytes()).and_then(|_| stdin.flush()),
            None => Err(std::io::Error::other("stdin already closed")),
        };
        written.map_err(|e| self.fail(session, format!("write to model failed: {e}")))
    }

    fn recv(&self, session: &mut Session, deadline: Instant) -> Result<String> {
        let wait = deadline.saturating_duration_since(Instant::now());
        match session.lines.recv_timeout(wait) {
            Ok(Ok(line)) => Ok(line),
            Ok(Err(e)) => Err(self.fail(session, format!("read from model failed: {e}"))),
            Err(RecvTimeoutError::Timeout) => Err(self.fail(
                session,
                format!("no response within {:?}", self.options.batch_timeout),
            )),
            Err(RecvTimeoutError::Disconnected) => {
                Err(self.fail(session, "model closed its output unexpectedly".into()))
            }
        }
    }

    fn handshake(&self) -> Result<()> {
        let mut session = self.session.lock().unwrap_or_else(|p| p.into_inner());
        self.send(&mut session, &hello_line(self.n_features))?;
        let deadline = Instant::now() + self.options.batch_timeout;
        let line = self.recv(&mut session, deadline)?;
        if line == READY {
            return Ok(());
        }
        let what = match line.strip_prefix(ERR_PREFIX) {
            Some(message) => format!("model reported error: {message}"),
            None => format!("expected READY, got {line:?}"),
        };
        Err(self.fail(&mut session, what))
    }

    /// Closes the child's stdin and waits for it to exit.
    pub fn shutdown(mut self) -> Result<ExitStatus> {
        let session = self.session.get_mut().unwrap_or_else(|p| p.into_inner());
        drop(session.stdin.take());
        Ok(session.child.wait()?)
    }
}

impl<T: Scalar> Model<T> for ExecModel<T> {
    fn predict_batch(&self, rows: ArrayView2<'_, T>) -> Result<Vec<T>> {
        if rows.ncols() != self.n_features {
            return Err(Error::InvalidInput(format!(
                "exec model expects {} features, got rows of {}",
                self.n_features,
                rows.ncols()
            )));
        }
        let mut session = self.session.lock().unwrap_or_else(|p| p.into_inner());
        if let Some(reason) = &session.broken {
            return Err(Error::ModelContract(format!("model unusable after earlier failure: {reason}")));
        }
        if let Ok(extra) = session.lines.try_recv() {
            let what = format!("unexpected output before batch: {:?}", extra.unwrap_or_default());
            return Err(self.fail(&mut session, what));
        }
        self.send(&mut session, &encode_batch(rows))?;
        let deadline = Instant::now() + self.options.batch_timeout;
        let mut predictions = Vec::with_capacity(rows.nrows());
        for _ in 0..rows.nrows() {
            let line = self.recv(&mut session, deadline)?;
            match decode_prediction(&line) {
                Ok(p) => predictions.push(p),
                Err(e) => return Err(self.fail(&mut session, e.to_string())),
            }
        }
        Ok(predictions)
    }

    fn is_serial(&self) -> bool {
        self.options.serial
    }
}

impl<T> std::fmt::Debug for ExecModel<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExecModel")
            .field("command", &self.command)
            .field("n_features", &self.n_features)
            .field("options", &self.options)
            .finish_non_exhaustive()
    }
}

impl<T> Drop for ExecModel<T> {
    fn drop(&mut self) {
        let session = self.session.get_mut().unwrap_or_else(|p| p.into_inner());
        drop(session.stdin.take());
        let deadline = Instant::now() + Duration::from_secs(5);
        while Instant::now() < deadline {
            match session.child.try_wait() {
                Ok(Some(_)) | Err(_) => return,
                Ok(None) => thread::sleep(Duration::from_millis(5)),
            }
        }
        let _ = session.child.kill();
        let _ = session.child.wait();
    }
}
