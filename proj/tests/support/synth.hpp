#pragma once

// Synthetic Java sources and clone variants for property and scale tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace synth {

struct JavaOptions {
    std::size_t methods_min = 2;
    std::size_t methods_max = 5;
    std::size_t statements_min = 3;
    std::size_t statements_max = 8;
    /// Number of distinct identifier stems; larger means fewer chance clones.
    std::size_t vocabulary = 60;
};

/// A syntactically valid Java class with one statement per line.
std::string java_class(std::mt19937_64& rng, const std::string& class_name, const JavaOptions& opts = {});

/// Type-1 variant: indentation, blank lines and comments change; tokens do not.
std::string reformat(const std::string& src, std::mt19937_64& rng);

/// Type-2 variant: generated identifiers are consistently renamed, and
/// integer literals too when `literals` is set. With identifier_fraction
/// below 1 each distinct identifier is renamed with that probability.
std::string rename(const std::string& src, std::mt19937_64& rng, bool literals = true,
                   double identifier_fraction = 1.0);

/// Type-3 variant: deletes about `fraction` of the simple statement lines.
std::string delete_statements(const std::string& src, double fraction, std::mt19937_64& rng);

/// Whether a word is an identifier introduced by the generator.
bool is_generated_identifier(const std::string& word);

}  // namespace synth

namespace synth {

struct OjOptions {
    std::size_t problems = 12;
    std::size_t submissions = 4;
    std::string language_dir = "Java";
};

/// Writes an online-judge style corpus: `<root>/<pid>/<language_dir>/<sid>.java`
/// plus `<root>/problem_descriptions/<pid>.txt`. Descriptions are drawn so
/// that problem pairs land in all three description-similarity groups.
void write_oj_corpus(const std::string& root, std::mt19937_64& rng, const OjOptions& opts = {});

}  // namespace synth
