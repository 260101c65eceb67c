#pragma once

#include <string>

#include "catalog.hpp"
#include "span_program.hpp"
#include "state_conversion.hpp"

namespace spansim {

// Documented JSON schemas; see README. Parse failures and invariant violations
// throw ParseError naming the offending field.

SpanProgram parse_span_program(const std::string& text, const std::string& origin = "<text>");
SpanProgram load_span_program(const std::string& path);
std::string span_program_to_json(const SpanProgram& p);
void save_span_program(const SpanProgram& p, const std::string& path);

GraphSpec parse_graph(const std::string& text, const std::string& origin = "<text>");
GraphSpec load_graph(const std::string& path);
std::string graph_to_json(const GraphSpec& g);
void save_graph(const GraphSpec& g, const std::string& path);

struct CvsDocument {
  ConvertingVectorSet cvs;
  GramPair gram;
};
CvsDocument parse_cvs(const std::string& text, const std::string& origin = "<text>");
CvsDocument load_cvs(const std::string& path);
std::string cvs_to_json(const ConvertingVectorSet& cvs, const GramPair& gram);
void save_cvs(const ConvertingVectorSet& cvs, const GramPair& gram, const std::string& path);

}  // namespace spansim
