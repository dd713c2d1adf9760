//! Plain CSV form of a nondominated set: `kind,x1,y1,x2,y2` with kind `P`
//! or `S`.

use std::io::{BufRead, Write};

use thiserror::Error;

use crate::geometry::{GeometryError, ParetoElement, Point};

pub const SET_HEADER: &str = "kind,x1,y1,x2,y2";

#[derive(Debug, Error)]
pub enum SetIoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Element { line: usize, source: GeometryError },
}

pub fn write_set<W: Write>(mut w: W, set: &[ParetoElement]) -> std::io::Result<()> {
    writeln!(w, "{SET_HEADER}")?;
    for e in set {
        let kind = if e.is_point() { 'P' } else { 'S' };
        writeln!(
            w,
            "{kind},{:.11e},{:.11e},{:.11e},{:.11e}",
            e.x1(),
            e.y1(),
            e.x2(),
            e.y2()
        )?;
    }
    Ok(())
}

pub fn read_set<R: BufRead>(r: R) -> Result<Vec<ParetoElement>, SetIoError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        if i == 0 && line.trim() == SET_HEADER {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |msg: String| SetIoError::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(parse_err(format!("expected 5 fields, got {}", fields.len())));
        }
        let mut v = [0.0; 4];
        for (slot, f) in v.iter_mut().zip(&fields[1..]) {
            *slot = f
                .parse()
                .map_err(|e| parse_err(format!("bad number {f:?}: {e}")))?;
        }
        let elem = match fields[0] {
            "P" => ParetoElement::point(v[0], v[1]),
            "S" => ParetoElement::segment(Point::new(v[0], v[1]), Point::new(v[2], v[3]))
                .map_err(|source| SetIoError::Element {
                    line: line_no,
                    source,
                })?,
            other => return Err(parse_err(format!("unknown kind {other:?}"))),
        };
        out.push(elem);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sets_match;

    #[test]
    fn round_trip() {
        let set = vec![
            ParetoElement::point(5.0, 11.0),
            ParetoElement::segment(Point::new(41.0 / 6.0, 11.0), Point::new(7.0, 10.0)).unwrap(),
        ];
        let mut buf = Vec::new();
        write_set(&mut buf, &set).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("kind,x1,y1,x2,y2\nP,5.00000000000e0,"));
        let back = read_set(buf.as_slice()).unwrap();
        assert!(sets_match(&set, &back, 1e-9));
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_set("kind,x1,y1,x2,y2\nQ,1,2,3,4\n".as_bytes()).is_err());
        assert!(read_set("P,1,2\n".as_bytes()).is_err());
        assert!(matches!(
            read_set("S,0,0,1,1\n".as_bytes()),
            Err(SetIoError::Element { line: 1, .. })
        ));
    }
}
