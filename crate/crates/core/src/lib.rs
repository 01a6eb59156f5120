pub mod bivar;
mod decimal;
pub mod fill;
pub mod lab;
pub mod measure;
pub mod rootmodel;
mod termparse;
pub mod zfactor;
