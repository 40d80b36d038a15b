//! Complex numbers serialize as `{"re": .., "im": ..}`.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::Serializer;

#[derive(serde::Serialize)]
struct Parts {
    re: f64,
    im: f64,
}

pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        match z {
            Some(z) => s.serialize_some(&Parts { re: z.re, im: z.im }),
            None => s.serialize_none(),
        }
    }
}
