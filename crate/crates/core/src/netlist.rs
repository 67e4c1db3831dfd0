//! Circuits of transmission lines, open stubs and lumped susceptances,
//! evaluated by nodal analysis and reduced to their ports.
//!
//! Text format, one item per line (`!` or `#` start a comment):
//!
//! ```text
//! F0 3.6e9
//! PORTS 1 2 3 4 5 6
//! TL    <z_ohms> <theta_rad> <node_a> <node_b>
//! STUB  <z_ohms> <theta_rad> <node_a> 0
//! B     <b0_siemens> <node_a> <node_b>     (node_b = 0 for a shunt element)
//! ```
//!
//! Node 0 is ground. Electrical lengths and susceptances refer to `F0`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, J};
use crate::netcore::{terminate, MultiportNetwork};
use crate::rfelements::{open_stub_admittance, Susceptance, TransmissionLine};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    /// Two-port line between two non-ground nodes.
    Line { z_c: f64, theta: f64, a: usize, b: usize },
    /// Open-ended stub hanging off `node`.
    Stub { z_c: f64, theta: f64, node: usize },
    /// Lumped susceptance; `b == 0` means shunt to ground.
    Lumped { b0: f64, a: usize, b: usize },
}

impl Element {
    pub fn is_line_segment(&self) -> bool {
        !matches!(self, Element::Lumped { .. })
    }

    fn nodes(&self) -> (usize, usize) {
        match *self {
            Element::Line { a, b, .. } | Element::Lumped { a, b, .. } => (a, b),
            Element::Stub { node, .. } => (node, 0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Netlist {
    pub f0: f64,
    /// Port nodes in port order.
    pub ports: Vec<usize>,
    pub elements: Vec<Element>,
}

impl Netlist {
    pub fn new(f0: f64, ports: Vec<usize>) -> Self {
        Self {
            f0,
            ports,
            elements: Vec::new(),
        }
    }

    pub fn push(&mut self, e: Element) {
        self.elements.push(e);
    }

    pub fn line(&mut self, tl: &TransmissionLine, a: usize, b: usize) {
        self.push(Element::Line {
            z_c: tl.z_c,
            theta: tl.electrical_length_at_f0,
            a,
            b,
        });
    }

    pub fn stub(&mut self, tl: &TransmissionLine, node: usize) {
        self.push(Element::Stub {
            z_c: tl.z_c,
            theta: tl.electrical_length_at_f0,
            node,
        });
    }

    pub fn lumped(&mut self, b0: f64, a: usize, b: usize) {
        self.push(Element::Lumped { b0, a, b });
    }

    /// Number of transmission-line pieces (lines and stubs).
    pub fn segment_count(&self) -> usize {
        self.elements.iter().filter(|e| e.is_line_segment()).count()
    }

    pub fn node_count(&self) -> usize {
        self.elements
            .iter()
            .map(|e| {
                let (a, b) = e.nodes();
                a.max(b)
            })
            .chain(self.ports.iter().copied())
            .max()
            .unwrap_or(0)
    }

    fn validate(&self) -> Result<()> {
        if !(self.f0 > 0.0) {
            return Err(Error::InvalidInput(format!("netlist f0 must be positive, got {}", self.f0)));
        }
        if self.ports.is_empty() {
            return Err(Error::InvalidInput("netlist has no ports".into()));
        }
        let mut seen = vec![false; self.node_count() + 1];
        for &p in &self.ports {
            if p == 0 || seen[p] {
                return Err(Error::InvalidInput(format!("bad or repeated port node {p}")));
            }
            seen[p] = true;
        }
        for e in &self.elements {
            match *e {
                Element::Line { z_c, a, b, .. } => {
                    if a == 0 || b == 0 || a == b {
                        return Err(Error::InvalidInput(format!("line needs two distinct non-ground nodes, got {a} {b}")));
                    }
                    if !(z_c > 0.0) {
                        return Err(Error::InvalidInput(format!("line impedance must be positive, got {z_c}")));
                    }
                }
                Element::Stub { z_c, node, .. } => {
                    if node == 0 || !(z_c > 0.0) {
                        return Err(Error::InvalidInput(format!("bad stub at node {node} with z {z_c}")));
                    }
                }
                Element::Lumped { a, b, .. } => {
                    if a == 0 || a == b {
                        return Err(Error::InvalidInput(format!("bad lumped element nodes {a} {b}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Full nodal admittance matrix at `f`, rows ordered as the ports followed
    /// by the remaining nodes in increasing order.
    fn nodal_matrix(&self, f: f64) -> Result<(CMatrix, usize)> {
        self.validate()?;
        let nn = self.node_count();
        let mut index = vec![usize::MAX; nn + 1];
        for (k, &p) in self.ports.iter().enumerate() {
            index[p] = k;
        }
        let mut next = self.ports.len();
        for slot in index.iter_mut().skip(1) {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        let mut y = CMatrix::zeros(nn, nn);
        let mut stamp_pair = |a: usize, b: usize, y11, y12, y22| {
            let (i, j) = (index[a], index[b]);
            y[(i, i)] += y11;
            y[(j, j)] += y22;
            y[(i, j)] += y12;
            y[(j, i)] += y12;
        };
        let mut shunts: Vec<(usize, num_complex::Complex64)> = Vec::new();
        for e in &self.elements {
            match *e {
                Element::Line { z_c, theta, a, b } => {
                    let tl = TransmissionLine::lossless(z_c, theta, self.f0);
                    let m = tl.y_matrix(f)?;
                    stamp_pair(a, b, m[(0, 0)], m[(0, 1)], m[(1, 1)]);
                }
                Element::Stub { z_c, theta, node } => {
                    let tl = TransmissionLine::lossless(z_c, theta, self.f0);
                    shunts.push((node, open_stub_admittance(&tl, f)?));
                }
                Element::Lumped { b0, a, b } => {
                    let yb = J * Susceptance::new(b0, self.f0).at(f);
                    if b == 0 {
                        shunts.push((a, yb));
                    } else {
                        stamp_pair(a, b, yb, -yb, yb);
                    }
                }
            }
        }
        for (node, ys) in shunts {
            let i = index[node];
            y[(i, i)] += ys;
        }
        Ok((y, nn))
    }

    /// Port admittance matrix at `f`, internal nodes eliminated.
    pub fn evaluate(&self, f: f64) -> Result<MultiportNetwork> {
        let (y, nn) = self.nodal_matrix(f)?;
        let np = self.ports.len();
        let full = MultiportNetwork::y(y, f)?;
        if nn == np {
            return Ok(full);
        }
        let internal: Vec<usize> = (np..nn).collect();
        let open = MultiportNetwork::y(CMatrix::zeros(nn - np, nn - np), f)?;
        terminate(&full, &open, &internal)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "F0 {:e}", self.f0);
        let ports: Vec<String> = self.ports.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(s, "PORTS {}", ports.join(" "));
        for e in &self.elements {
            let _ = match *e {
                Element::Line { z_c, theta, a, b } => writeln!(s, "TL {z_c:.15e} {theta:.15e} {a} {b}"),
                Element::Stub { z_c, theta, node } => writeln!(s, "STUB {z_c:.15e} {theta:.15e} {node} 0"),
                Element::Lumped { b0, a, b } => writeln!(s, "B {b0:.15e} {a} {b}"),
            };
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut f0 = None;
        let mut ports = None;
        let mut elements = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split(['!', '#']).next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let perr = |msg: String| Error::Parse { line, msg };
            let num = |s: &str| s.parse::<f64>().map_err(|_| perr(format!("bad number `{s}`")));
            let node = |s: &str| s.parse::<usize>().map_err(|_| perr(format!("bad node `{s}`")));
            let arity = |n: usize| {
                if toks.len() != n {
                    Err(perr(format!("`{}` expects {} fields, found {}", toks[0], n - 1, toks.len() - 1)))
                } else {
                    Ok(())
                }
            };
            match toks[0].to_ascii_uppercase().as_str() {
                "F0" => {
                    arity(2)?;
                    f0 = Some(num(toks[1])?);
                }
                "PORTS" => {
                    ports = Some(toks[1..].iter().map(|t| node(t)).collect::<Result<Vec<_>>>()?);
                }
                "TL" => {
                    arity(5)?;
                    elements.push(Element::Line {
                        z_c: num(toks[1])?,
                        theta: num(toks[2])?,
                        a: node(toks[3])?,
                        b: node(toks[4])?,
                    });
                }
                "STUB" => {
                    arity(5)?;
                    if node(toks[4])? != 0 {
                        return Err(perr("stub must end at node 0".into()));
                    }
                    elements.push(Element::Stub {
                        z_c: num(toks[1])?,
                        theta: num(toks[2])?,
                        node: node(toks[3])?,
                    });
                }
                "B" => {
                    arity(4)?;
                    elements.push(Element::Lumped {
                        b0: num(toks[1])?,
                        a: node(toks[2])?,
                        b: node(toks[3])?,
                    });
                }
                other => return Err(perr(format!("unknown element type `{other}`"))),
            }
        }
        let f0 = f0.ok_or(Error::Parse { line: 0, msg: "missing F0 line".into() })?;
        let ports = ports.ok_or(Error::Parse { line: 0, msg: "missing PORTS line".into() })?;
        let nl = Netlist { f0, ports, elements };
        nl.validate()?;
        Ok(nl)
    }
}
