#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>

#include "skel/checker.hpp"
#include "skel/formula.hpp"
#include "skel/net.hpp"
#include "skel/statespace.hpp"

namespace skel {

enum class Truth { True, False, Unknown };

// Which preservation argument carried the abstract result over.
enum class Basis { None, DeadlockFree, DeadlockPreserving, Stuttering, SafetyAbstraction, Direct };

enum class SoundnessClass { DeadlockFree, DeadlockPreserving, Injectable, None };

std::string_view to_string(Truth t) noexcept;
std::string_view to_string(Basis b) noexcept;
std::string_view to_string(SoundnessClass c) noexcept;

struct Budgets {
    std::size_t stateCap = kDefaultStateCap; // per exploration
    std::size_t probeCap = 100'000;          // deadlock-freedom probe on the coloured net
    std::size_t unfoldCap = kDefaultUnfoldCap;
    std::size_t productCap = 4'000'000;
    std::optional<std::chrono::milliseconds> timeLimit; // whole verify call
    bool fold = true;  // fold P/T input when worthwhile
    bool race = false; // run the direct check alongside the skeleton path
    bool direct = true;
};

struct Verdict {
    Truth value = Truth::Unknown;
    Basis basis = Basis::None;
    std::optional<bool> abstractResult;
    std::size_t states = 0; // states of the structure that decided the verdict
    double milliseconds = 0;
    bool folded = false; // P/T input was folded before the skeleton path
    std::string reason;
};

// Deadlock-freedom by exploring the coloured net within probeCap, then
// fullness of the minimal classes; injection otherwise.
SoundnessClass soundness_class(const ColouredNet& net, std::size_t probeCap);

// `positive` classifies the formula and `negated` its negation, both in NNF.
// TRUE needs the formula to qualify for the basis; FALSE needs the negation.
Verdict transfer(bool abstractResult, const FragmentReport& positive, const FragmentReport& negated, Basis basis);

// The negation of a formula read at the initial state, in NNF.
Formula negated_nnf(const Formula& f);

Verdict verify(const ColouredNet& net, const Formula& f, const Budgets& budgets = {});
Verdict verify(const PTNet& net, const Formula& f, const Budgets& budgets = {});

} // namespace skel
