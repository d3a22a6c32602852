//! Laurent polynomials, matrix symbols, characteristic functions and Newton polygons.

pub mod bivariate;
pub mod charfn;
pub mod coeff;
pub mod det;
pub mod laurent;
pub mod newton;
pub mod scalar;
pub mod symbol;

pub use bivariate::BiPoly;
pub use charfn::{char_function, coeff_ord_deg, is_generic, scalar_symbol, CharFunction, OrdDeg, ScalarSymbol};
pub use coeff::{AsComplex, Coeff, FLOAT_ZERO_REL};
pub use laurent::LaurentPoly;
pub use newton::{newton_polygon, NewtonPolygon};
pub use scalar::{Mode, Scalar, ScalarError};
pub use symbol::{
    from_periodic_sequences, load_symbol, parse_symbol, parse_symbol_with, placeholders, symbol_to_json, MatrixSymbol,
    SymbolError,
};
