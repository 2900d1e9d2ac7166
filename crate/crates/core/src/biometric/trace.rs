//! Touch traces and their JSON-lines file format.
//!
//! A rendering file is an optional header line
//! `{"user":..,"symbol":..,"session":..}` followed by one event per line:
//! `{"t":ms,"x":..,"y":..,"p":..|null,"s":..|null,"a":"down"|"move"|"up","m":[15]|null}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TouchAction {
    Down,
    Move,
    Up,
}

impl TouchAction {
    /// Numeric code used for the action-type feature.
    pub fn code(self) -> f64 {
        match self {
            TouchAction::Down => 0.0,
            TouchAction::Move => 1.0,
            TouchAction::Up => 2.0,
        }
    }
}

/// Rotation, gyroscope, accelerometer, gravity and linear acceleration, each
/// as x, y, z.
pub type MotionBlock = [f64; 15];

/// Field order is part of the file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TouchEvent {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub p: Option<f64>,
    pub s: Option<f64>,
    #[serde(rename = "a")]
    pub action: TouchAction,
    #[serde(rename = "m")]
    pub motion: Option<MotionBlock>,
}

impl TouchEvent {
    pub fn new(t: f64, x: f64, y: f64, action: TouchAction) -> Self {
        Self { t, x, y, p: None, s: None, action, motion: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TraceHeader {
    pub user: String,
    pub symbol: String,
    pub session: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("trace has {0} events; at least 2 are required")]
    TooShort(usize),
    #[error("event {index}: {message}")]
    Invalid { index: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trace {
    pub header: Option<TraceHeader>,
    pub events: Vec<TouchEvent>,
}

impl Trace {
    pub fn new(events: Vec<TouchEvent>) -> Result<Self, TraceError> {
        let trace = Self { header: None, events };
        trace.validate()?;
        Ok(trace)
    }

    pub fn with_header(mut self, header: TraceHeader) -> Self {
        self.header = Some(header);
        self
    }

    /// Events start with `down`, end with `up`, alternate strokes properly,
    /// have finite coordinates and non-decreasing timestamps.
    pub fn validate(&self) -> Result<(), TraceError> {
        let ev = &self.events;
        if ev.len() < 2 {
            return Err(TraceError::TooShort(ev.len()));
        }
        let invalid = |index: usize, message: &str| TraceError::Invalid { index, message: message.to_owned() };
        let mut touching = false;
        for (i, e) in ev.iter().enumerate() {
            if ![e.t, e.x, e.y].iter().all(|v| v.is_finite()) {
                return Err(invalid(i, "non-finite time or coordinate"));
            }
            if i > 0 && e.t < ev[i - 1].t {
                return Err(invalid(i, "timestamp decreases"));
            }
            match (e.action, touching) {
                (TouchAction::Down, false) => touching = true,
                (TouchAction::Down, true) => return Err(invalid(i, "down while already touching")),
                (TouchAction::Move, true) => {}
                (TouchAction::Up, true) => touching = false,
                (_, false) => return Err(invalid(i, "event before down")),
            }
        }
        if touching {
            return Err(invalid(ev.len() - 1, "trace does not end with up"));
        }
        Ok(())
    }

    pub fn parse_jsonl(text: &str) -> Result<Self, TraceError> {
        let mut header = None;
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |e: serde_json::Error| TraceError::Parse { line: line_no, message: e.to_string() };
            let value: serde_json::Value = serde_json::from_str(line).map_err(parse_err)?;
            if value.get("user").is_some() && value.get("a").is_none() {
                if header.is_some() || !events.is_empty() {
                    return Err(TraceError::Parse { line: line_no, message: "header must be the first line".into() });
                }
                header = Some(serde_json::from_value(value).map_err(parse_err)?);
            } else {
                events.push(serde_json::from_value(value).map_err(parse_err)?);
            }
        }
        let trace = Self { header, events };
        trace.validate()?;
        Ok(trace)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        if let Some(h) = &self.header {
            out.push_str(&serde_json::to_string(h).expect("header serializes"));
            out.push('\n');
        }
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("event serializes"));
            out.push('\n');
        }
        out
    }

    /// Same trace shifted by `(dx, dy)`.
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        let mut t = self.clone();
        for e in &mut t.events {
            e.x += dx;
            e.y += dy;
        }
        t
    }

    /// Same trace with coordinates scaled about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut t = self.clone();
        for e in &mut t.events {
            e.x *= factor;
            e.y *= factor;
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{"user":"u1","symbol":"xman","session":"s1"}
{"t":0.0,"x":10.0,"y":20.0,"p":0.5,"s":0.1,"a":"down","m":null}
{"t":16.5,"x":12.0,"y":21.0,"p":0.55,"s":0.1,"a":"move","m":null}
{"t":33.0,"x":15.0,"y":23.5,"p":null,"s":null,"a":"up","m":[0.0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0,1.1,1.2,1.3,1.4]}
"#;

    #[test]
    fn round_trip_is_byte_exact() {
        let t = Trace::parse_jsonl(SAMPLE).unwrap();
        assert_eq!(t.header.as_ref().unwrap().symbol, "xman");
        assert_eq!(t.events.len(), 3);
        assert_eq!(t.events[2].motion.unwrap()[14], 1.4);
        assert_eq!(t.to_jsonl(), SAMPLE);
    }

    #[test]
    fn errors_name_the_line() {
        let bad = SAMPLE.replace(r#""a":"move""#, r#""a":"hover""#);
        match Trace::parse_jsonl(&bad) {
            Err(TraceError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match Trace::parse_jsonl("{\"t\":0,\"x\":1}") {
            Err(TraceError::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structural_checks() {
        let e = |t, a| TouchEvent::new(t, 0.0, 0.0, a);
        use TouchAction::*;
        assert!(Trace::new(vec![e(0.0, Down), e(1.0, Up)]).is_ok());
        assert!(Trace::new(vec![e(0.0, Down), e(1.0, Up), e(2.0, Down), e(3.0, Move), e(4.0, Up)]).is_ok());
        assert!(matches!(Trace::new(vec![e(0.0, Down)]), Err(TraceError::TooShort(1))));
        assert!(Trace::new(vec![e(0.0, Move), e(1.0, Up)]).is_err());
        assert!(Trace::new(vec![e(0.0, Down), e(1.0, Move)]).is_err());
        assert!(Trace::new(vec![e(1.0, Down), e(0.0, Up)]).is_err());
        assert!(Trace::new(vec![e(0.0, Down), e(0.5, Down), e(1.0, Up)]).is_err());
    }
}
