pub mod bounds;
pub mod certify;
pub mod determinant;
pub mod diagram;
pub mod notation;
pub mod numerics;
pub mod pipeline;
pub mod tait;
pub mod twist;
