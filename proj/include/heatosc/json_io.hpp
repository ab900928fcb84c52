#pragma once

#include <json.hpp>

#include "heatosc/initial_data.hpp"
#include "heatosc/prescriber.hpp"
#include "heatosc/solution_probe.hpp"

namespace heatosc {

// Documents carry a "schema" field: "idexpr/1", "cert/1" or "report/1".
// Malformed documents raise DomainError naming the offending field.

nlohmann::json expr_to_json(const InitialDataExpr& e);  // node without the schema tag
InitialDataExpr expr_from_json(const nlohmann::json& j);
nlohmann::json expr_document(const InitialDataExpr& e);  // {"schema": "idexpr/1", "expr": ...}
InitialDataExpr expr_from_document(const nlohmann::json& doc);

nlohmann::json cert_to_json(const PrescriptionCertificate& cert);
PrescriptionCertificate cert_from_json(const nlohmann::json& doc);

nlohmann::json band_to_json(const OscillationBand& band);
nlohmann::json report_to_json(const VerificationReport& report);

}  // namespace heatosc
