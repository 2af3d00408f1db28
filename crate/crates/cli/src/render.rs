//! Text rendering of values and tables.

use std::io::{self, Write};

use num_rational::BigRational;
use wasp_core::rational::format_decimal;
use wasp_core::{Analysis, ClassKey, Event, Poly, RationalFn};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Tsv,
    Json,
    Pretty,
}

/// How numbers and events are shown.
#[derive(Clone, Copy, Debug, Default)]
pub struct Style {
    /// Decimal digits, or exact rationals when `None`.
    pub approx: Option<usize>,
    pub hide_aux: bool,
}

impl Style {
    pub fn number(&self, value: &BigRational) -> String {
        match self.approx {
            Some(digits) => format_decimal(value, digits),
            None => value.to_string(),
        }
    }

    pub fn poly(&self, analysis: &Analysis, poly: &Poly) -> String {
        if self.approx.is_none() {
            return analysis.render_poly(poly);
        }
        if poly.is_zero() {
            return self.number(&BigRational::default());
        }
        let mut out = String::new();
        for (i, (monomial, coeff)) in poly.terms().enumerate() {
            let negative = coeff < &BigRational::default();
            let magnitude = if negative {
                -coeff.clone()
            } else {
                coeff.clone()
            };
            out.push_str(match (i, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let factors: Vec<String> = monomial
                .factors()
                .iter()
                .map(|(v, e)| match e {
                    1 => analysis.param_name(v),
                    _ => format!("{}^{e}", analysis.param_name(v)),
                })
                .collect();
            let one = magnitude == BigRational::from_integer(1.into());
            match (factors.is_empty(), one) {
                (true, _) => out.push_str(&self.number(&magnitude)),
                (false, true) => out.push_str(&factors.join("*")),
                (false, false) => {
                    out.push_str(&self.number(&magnitude));
                    out.push('*');
                    out.push_str(&factors.join("*"));
                }
            }
        }
        out
    }

    pub fn function(&self, analysis: &Analysis, f: &RationalFn) -> String {
        if let Some(c) = f.as_constant() {
            return self.number(&c);
        }
        let num = self.poly(analysis, f.numerator());
        match f.denominator().as_constant() {
            Some(d) if d == BigRational::from_integer(1.into()) => num,
            _ => format!("({num}) / ({})", self.poly(analysis, f.denominator())),
        }
    }

    /// Space-separated atoms; `{}` for the empty event.
    pub fn event(&self, analysis: &Analysis, event: Event) -> String {
        let u = analysis.universe();
        let event = if self.hide_aux {
            u.strip_reserved(event)
        } else {
            event
        };
        if event.is_empty() {
            "{}".to_string()
        } else {
            u.render(event)
        }
    }

    /// Compact model names, e.g. `{-a, ab, ac}`, or `bot`.
    pub fn class(&self, analysis: &Analysis, key: ClassKey) -> String {
        match key {
            ClassKey::Inconsistent => "bot".to_string(),
            ClassKey::Core(core) => {
                let u = analysis.universe();
                let names: Vec<String> = core
                    .ids()
                    .map(|id| {
                        let m = analysis.models().get(id);
                        u.render_compact(if self.hide_aux {
                            u.strip_reserved(m)
                        } else {
                            m
                        })
                    })
                    .collect();
                format!("{{{}}}", names.join(", "))
            }
        }
    }
}

/// Rows of strings under named columns.
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Pretty output omits the header line.
    pub bare: bool,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Table {
            headers,
            rows: Vec::new(),
            bare: false,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.rows
            .iter()
            .map(|row| {
                self.headers
                    .iter()
                    .zip(row)
                    .map(|(h, v)| (h.to_string(), serde_json::Value::String(v.clone())))
                    .collect::<serde_json::Map<_, _>>()
            })
            .collect()
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&self.to_json()).expect("json")
            ),
            Format::Tsv => {
                writeln!(out, "{}", self.headers.join("\t"))?;
                for row in &self.rows {
                    writeln!(out, "{}", row.join("\t"))?;
                }
                Ok(())
            }
            Format::Pretty => {
                let mut widths: Vec<usize> =
                    self.headers.iter().map(|h| h.chars().count()).collect();
                if self.bare {
                    widths.iter_mut().for_each(|w| *w = 0);
                }
                for row in &self.rows {
                    for (w, cell) in widths.iter_mut().zip(row) {
                        *w = (*w).max(cell.chars().count());
                    }
                }
                let line = |cells: Vec<&str>| -> String {
                    let last = cells.len().saturating_sub(1);
                    cells
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            if i == last {
                                c.to_string()
                            } else {
                                format!("{c}{}", " ".repeat(widths[i] - c.chars().count()))
                            }
                        })
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                if !self.bare {
                    writeln!(out, "{}", line(self.headers.clone()))?;
                }
                for row in &self.rows {
                    writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
                }
                Ok(())
            }
        }
    }
}
