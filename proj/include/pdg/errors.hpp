#pragma once

#include <stdexcept>
#include <string>

namespace pdg {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

// Malformed or invalid mesh input (parse errors, non-simple cells, dangling
// nodes, non-manifold faces).
class MeshError : public Error {
public:
    using Error::Error;
};

// Interface classification failures; usually means the mesh is too coarse
// for the interface.
class GeometryError : public Error {
public:
    using Error::Error;
};

class PatchError : public Error {
public:
    using Error::Error;
};

// Sampling nodes of a patch lie on an algebraic curve of the fitted degree.
class UnisolvenceError : public PatchError {
public:
    using PatchError::PatchError;
};

class AssemblyError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

// Inconsistent benchmark definition (data does not match the exact solution).
class SpecError : public Error {
public:
    using Error::Error;
};

} // namespace pdg
