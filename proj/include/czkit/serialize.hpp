#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "czkit/amenability.hpp"
#include "czkit/base_family.hpp"
#include "czkit/cubes.hpp"
#include "czkit/cz.hpp"
#include "czkit/family.hpp"
#include "czkit/maximal.hpp"
#include "czkit/models.hpp"
#include "czkit/space.hpp"

namespace czkit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.3.0";

/// Finite doubles as numbers; infinities and NaN as the strings "inf", "-inf", "nan".
Json number(double x);
double read_number(const Json& j);

std::uint64_t fnv1a(std::string_view bytes);
std::string hash_hex(std::string_view bytes);
/// Stable text form: two-space indent, trailing newline.
std::string dump(const Json& j);

Json to_json(const MetricMeasureSpace& space);
MetricMeasureSpace space_from_json(const Json& j);

Json to_json(const DyadicTree& tree);
DyadicTree tree_from_json(const Json& j);

/// Array of {id, members, meta}.
Json to_json(const SetFamily& family);
SetFamily family_from_json(const Json& j, std::size_t n_points);

/// {"values": [...]}; a bare array is accepted on read.
Json function_to_json(std::span<const double> f);
std::vector<double> function_from_json(const Json& j);

Json to_json(const SparseFunction& f);
Json to_json(const CZDecomposition& dec);
CZDecomposition decomposition_from_json(const Json& j);

Json to_json(const CubeReport& rep);
Json to_json(const FamilyVerification& v);
Json to_json(const FamilyReport& rep);
Json to_json(const MaximalResult& m);
Json to_json(const Weak11Result& w);
Json to_json(const DifferentiationResult& d);
Json to_json(const VerificationReport& rep);
Json to_json(const CoarsenResult& c);
Json to_json(const ScanTable& t);
/// f_index,lambda,skipped,C_support,C_measure,C_l1,C_good,C_max
std::string scan_csv(const ScanTable& t);
Json to_json(const QuadraticForm& q);
Json to_json(const MetricChain& chain, const ChainCheck& check);
Json to_json(const BaseFamily& bf);
Json to_json(const DoublingCertificate& c);
Json to_json(const ProductInequality& p);
Json to_json(const std::vector<UnidoubleRow>& rows);

}  // namespace czkit
