#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqznet/network.hpp"

namespace sqznet {

// ---------------------------------------------------------------------------
// Netlist DSL
//
//   document   := statement* ;
//   statement  := param | component | connect | detect | sweepdecl ;
//   param      := "param" IDENT "=" expr ;
//   component  := KIND IDENT "{" (IDENT "=" expr (unit)? ("," ...)*)? "}" ;
//   KIND       := "laser" | "vacuum" | "bs" | "opa" | "loss" | "phase"
//               | "mc" | "homodyne" ;
//   connect    := "connect" IDENT "." IDENT "->" IDENT "." IDENT ;
//   detect     := "detect" IDENT ;
//   sweepdecl  := "sweep" "freq" NUMBER NUMBER ("lin"|"log") INTEGER ;
//   expr       := + - * / arithmetic over NUMBER and previously bound IDENTs,
//                 with unary minus and parentheses ;
//   unit       := "Hz" | "kHz" | "MHz"  (frequency-valued keys only) ;
//
// '#' starts a line comment. Unit suffixes scale the value to Hz; keys
// without the suffix are already Hz for frequency keys. Parameters bind in
// file order (no forward references).
// ---------------------------------------------------------------------------

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string message;
    std::size_t line = 0;   // 1-based
    std::size_t column = 0; // 1-based
    std::string token;      // offending token text, possibly empty

    std::string format() const; // "line:col: error: message"
};

struct StatementPos {
    std::size_t line = 0;
    std::size_t column = 0;
};

// Parsed document: the network-shaped payload plus per-statement source
// positions (component name -> position) used for elaboration diagnostics.
struct NetlistDocument {
    Network network;
    std::map<std::string, double> params;
    std::map<std::string, StatementPos> component_pos;
    std::vector<std::pair<Connection, StatementPos>> connection_pos;
    std::vector<std::pair<std::string, StatementPos>> detect_pos;
};

struct ParseResult {
    std::optional<NetlistDocument> doc; // set iff no error diagnostics
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return doc.has_value(); }
};

// Parse netlist text. Never throws on malformed input: every lexical,
// syntactic or semantic problem becomes an error Diagnostic with a position
// inside the text.
ParseResult parse(std::string_view text);

struct ElaborateResult {
    std::optional<Network> network;
    std::vector<Diagnostic> diagnostics; // warnings even on success
    bool ok() const { return network.has_value(); }
};

// Validate the parsed document as a runnable network: known ports, single
// drivers, acyclic graph, at least one detector, detectors are homodynes.
// Unconnected inputs produce warnings (the engine fills them with vacuum).
ElaborateResult elaborate(const NetlistDocument& doc);

// Convenience: parse + elaborate, returning all diagnostics combined.
ElaborateResult load_netlist(std::string_view text);

// Canonical netlist text: components sorted by name with keys in canonical
// order, then connections sorted lexicographically, then detects, then the
// sweep line. Numbers print with shortest round-trip formatting, so
// load_netlist(serialize(n)) reproduces n exactly.
std::string serialize(const Network& net);

} // namespace sqznet
