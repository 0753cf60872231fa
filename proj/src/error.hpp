#pragma once

#include <stdexcept>
#include <string>

namespace stirlab {

// Base of every error thrown by the core. The C API maps each subclass to a
// status code, so new subclasses need a matching entry in capi.cpp.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

class InitError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class StateError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Rethrows the in-flight stirlab error with `context` prefixed, keeping its
// type. Must be called from inside a catch block.
[[noreturn]] inline void rethrow_with_context(const std::string& context) {
    try {
        throw;
    } catch (const ParameterError& e) {
        throw ParameterError(context + ": " + e.what());
    } catch (const GenerationError& e) {
        throw GenerationError(context + ": " + e.what());
    } catch (const InitError& e) {
        throw InitError(context + ": " + e.what());
    } catch (const FitError& e) {
        throw FitError(context + ": " + e.what());
    } catch (const StateError& e) {
        throw StateError(context + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    } catch (const FormatError& e) {
        throw FormatError(context + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError(context + ": " + e.what());
    } catch (const Error& e) {
        throw Error(context + ": " + e.what());
    }
}

}  // namespace stirlab
