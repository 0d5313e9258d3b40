#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "mutascan/pipeline.hpp"

namespace mutascan {

using ojson = nlohmann::ordered_json;

namespace {

ojson to_json(const GateVerdict& v) {
  return {{"accepted", v.accepted},
          {"measuredGc", v.measuredGc},
          {"target", v.target},
          {"tolerance", v.tolerance},
          {"geneBandFlag", v.geneBandFlag}};
}

GateVerdict verdict_from(const ojson& j) {
  return {j.at("accepted").get<bool>(), j.at("measuredGc").get<double>(),
          j.at("target").get<double>(), j.at("tolerance").get<double>(),
          j.at("geneBandFlag").get<bool>()};
}

ojson to_json(const LocalAlignment& a) {
  ojson ops = ojson::array();
  for (const OpRun& r : a.alignment.ops) ops.push_back({to_string(r.kind), r.length});
  return {{"queryBegin", a.queryBegin},
          {"queryEnd", a.queryEnd},
          {"subjectBegin", a.subjectBegin},
          {"subjectEnd", a.subjectEnd},
          {"score", a.alignment.score},
          {"identityPercent", a.alignment.identityPercent},
          {"alignedQuery", a.alignment.alignedA},
          {"alignedSubject", a.alignment.alignedB},
          {"ops", ops}};
}

LocalAlignment local_alignment_from(const ojson& j) {
  LocalAlignment a;
  a.queryBegin = j.at("queryBegin").get<std::size_t>();
  a.queryEnd = j.at("queryEnd").get<std::size_t>();
  a.subjectBegin = j.at("subjectBegin").get<std::size_t>();
  a.subjectEnd = j.at("subjectEnd").get<std::size_t>();
  a.alignment = make_alignment(j.at("alignedQuery").get<std::string>(),
                               j.at("alignedSubject").get<std::string>(), j.at("score").get<long>());
  return a;
}

ojson to_json(const HomologyHit& h) {
  ojson alns = ojson::array();
  for (const LocalAlignment& a : h.alignments) alns.push_back(to_json(a));
  return {{"subjectId", h.subjectId},
          {"description", h.description},
          {"maxScore", h.maxScore},
          {"totalScore", h.totalScore},
          {"queryCover", h.queryCover},
          {"eValue", h.eValue},
          {"maxIdent", h.maxIdent},
          {"bestAlignment", to_json(h.bestAlignment)},
          {"alignments", alns}};
}

HomologyHit hit_from(const ojson& j) {
  HomologyHit h;
  h.subjectId = j.at("subjectId").get<std::string>();
  h.description = j.at("description").get<std::string>();
  h.maxScore = j.at("maxScore").get<long>();
  h.totalScore = j.at("totalScore").get<long>();
  h.queryCover = j.at("queryCover").get<double>();
  h.eValue = j.at("eValue").get<double>();
  h.maxIdent = j.at("maxIdent").get<double>();
  h.bestAlignment = local_alignment_from(j.at("bestAlignment"));
  for (const auto& a : j.at("alignments")) h.alignments.push_back(local_alignment_from(a));
  return h;
}

ojson aa_json(const std::optional<char>& aa) {
  return aa ? ojson(std::string(1, *aa)) : ojson();
}

std::optional<char> aa_from(const ojson& j) {
  if (j.is_null()) return std::nullopt;
  const auto s = j.get<std::string>();
  if (s.size() != 1) throw Error(ErrorCode::CorruptFile, "amino acid must be one letter");
  return s[0];
}

ojson to_json(const Mutation& m) {
  ojson effect;
  if (m.effect)
    effect = {{"kind", to_string(m.effect->kind)},
              {"refAA", aa_json(m.effect->refAA)},
              {"altAA", aa_json(m.effect->altAA)}};
  return {{"position", m.position},
          {"kind", to_string(m.kind)},
          {"ref", m.refBases},
          {"alt", m.altBases},
          {"effect", effect}};
}

Mutation mutation_from(const ojson& j) {
  Mutation m;
  m.position = j.at("position").get<std::size_t>();
  m.kind = parse_mutation_kind(j.at("kind").get<std::string>());
  m.refBases = j.at("ref").get<std::string>();
  m.altBases = j.at("alt").get<std::string>();
  const auto& e = j.at("effect");
  if (!e.is_null())
    m.effect = ProteinEffect{parse_effect_kind(e.at("kind").get<std::string>()),
                             aa_from(e.at("refAA")), aa_from(e.at("altAA"))};
  return m;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string effect_text(const Mutation& m) {
  if (!m.effect) return "-";
  std::string s(to_string(m.effect->kind));
  if (m.effect->refAA) {
    s += "(" + std::string(1, *m.effect->refAA) + ">";
    s += m.effect->altAA ? std::string(1, *m.effect->altAA) : std::string("*");
    s += ")";
  }
  return s;
}

std::string verdict_text(const GateVerdict& v) {
  return "GC " + fixed(v.measuredGc, 1) + "% (target " + fixed(v.target, 1) + " +/- " +
         fixed(v.tolerance, 1) + ")" + (v.geneBandFlag ? " [gene band 45-50%]" : "");
}

}  // namespace

std::string hit_to_json_line(const HomologyHit& hit) { return to_json(hit).dump(); }

std::string mutation_to_json_line(const Mutation& mutation) { return to_json(mutation).dump(); }

std::string render_report_json(const DiagnosisReport& r) {
  ojson doc;
  doc["patientId"] = r.patientId;
  doc["patientLength"] = r.patientLength;
  const AdoptedReference& a = r.adoptedReference;
  doc["adoptedReference"] = {{"databaseName", a.databaseName},
                             {"subjectId", a.subjectId},
                             {"verdict", to_json(a.verdict)},
                             {"cds", {{"start", a.cds.start}, {"end", a.cds.end}}},
                             {"topHit", to_json(a.topHit)}};
  doc["rejectedReferences"] = ojson::array();
  for (const RejectedReference& rej : r.rejectedReferences) {
    doc["rejectedReferences"].push_back({{"databaseName", rej.databaseName},
                                         {"subjectId", rej.subjectId},
                                         {"verdict", rej.verdict ? to_json(*rej.verdict) : ojson()},
                                         {"reason", rej.reason}});
  }
  doc["alignment"] = {{"score", r.alignment.score},
                      {"identityPercent", r.alignment.identityPercent},
                      {"length", r.alignment.length}};
  doc["mutations"] = ojson::array();
  for (const Mutation& m : r.mutations) doc["mutations"].push_back(to_json(m));
  doc["malignantCandidates"] = ojson::array();
  for (const Mutation& m : r.malignantCandidates) doc["malignantCandidates"].push_back(to_json(m));
  doc["classifications"] = ojson::array();
  for (const CandidateResult& c : r.classifications) {
    doc["classifications"].push_back({{"mutationIndex", c.mutationIndex},
                                      {"features", c.features.values},
                                      {"score", c.classification.score},
                                      {"label", to_string(c.classification.label)}});
  }
  doc["overallLabel"] = to_string(r.overallLabel);
  doc["displayText"] = r.displayText;
  doc["toolVersions"] = r.toolVersions;
  doc["config"] = {{"gcTarget", r.config.gcTarget},
                   {"gcTolerance", r.config.gcTolerance},
                   {"k", r.config.k},
                   {"threshold", r.config.threshold},
                   {"modelSource", r.config.modelSource}};
  doc["notes"] = r.notes;
  return doc.dump(2) + "\n";
}

DiagnosisReport parse_report_json(const std::string& json) {
  DiagnosisReport r;
  try {
    const ojson doc = ojson::parse(json);
    r.patientId = doc.at("patientId").get<std::string>();
    r.patientLength = doc.at("patientLength").get<std::size_t>();
    const auto& a = doc.at("adoptedReference");
    r.adoptedReference.databaseName = a.at("databaseName").get<std::string>();
    r.adoptedReference.subjectId = a.at("subjectId").get<std::string>();
    r.adoptedReference.verdict = verdict_from(a.at("verdict"));
    r.adoptedReference.cds = {a.at("cds").at("start").get<std::size_t>(),
                              a.at("cds").at("end").get<std::size_t>()};
    r.adoptedReference.topHit = hit_from(a.at("topHit"));
    for (const auto& rej : doc.at("rejectedReferences")) {
      RejectedReference x;
      x.databaseName = rej.at("databaseName").get<std::string>();
      x.subjectId = rej.at("subjectId").get<std::string>();
      if (!rej.at("verdict").is_null()) x.verdict = verdict_from(rej.at("verdict"));
      x.reason = rej.at("reason").get<std::string>();
      r.rejectedReferences.push_back(std::move(x));
    }
    const auto& al = doc.at("alignment");
    r.alignment = {al.at("score").get<long>(), al.at("identityPercent").get<double>(),
                   al.at("length").get<std::size_t>()};
    for (const auto& m : doc.at("mutations")) r.mutations.push_back(mutation_from(m));
    for (const auto& m : doc.at("malignantCandidates"))
      r.malignantCandidates.push_back(mutation_from(m));
    for (const auto& c : doc.at("classifications")) {
      CandidateResult x;
      x.mutationIndex = c.at("mutationIndex").get<std::size_t>();
      const auto values = c.at("features").get<std::vector<double>>();
      if (values.size() != kFeatureCount)
        throw Error(ErrorCode::CorruptFile, "classification features must have 10 values");
      std::copy(values.begin(), values.end(), x.features.values.begin());
      x.classification = {c.at("score").get<double>(), parse_label(c.at("label").get<std::string>())};
      r.classifications.push_back(x);
    }
    r.overallLabel = parse_label(doc.at("overallLabel").get<std::string>());
    r.displayText = doc.at("displayText").get<std::string>();
    r.toolVersions = doc.at("toolVersions").get<std::map<std::string, std::string>>();
    const auto& c = doc.at("config");
    r.config = {c.at("gcTarget").get<double>(), c.at("gcTolerance").get<double>(),
                c.at("k").get<std::size_t>(), c.at("threshold").get<double>(),
                c.at("modelSource").get<std::string>()};
    r.notes = doc.at("notes").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("report: ") + e.what());
  }
  return r;
}

std::string render_report_text(const DiagnosisReport& r) {
  std::ostringstream out;
  out << "Mutational disease prediction report\n";
  out << "====================================\n";
  out << "patient: " << r.patientId << " (" << r.patientLength << " bp)\n\n";

  out << "[reference adoption]\n";
  for (const RejectedReference& rej : r.rejectedReferences) {
    out << "  " << rej.databaseName << ": rejected";
    if (rej.verdict)
      out << " " << rej.subjectId << " " << verdict_text(*rej.verdict) << "\n";
    else
      out << " (no homology hits)\n";
  }
  const AdoptedReference& a = r.adoptedReference;
  out << "  " << a.databaseName << ": adopted " << a.subjectId << " " << verdict_text(a.verdict)
      << ", CDS " << a.cds.start << "-" << a.cds.end << "\n\n";
  out << "[homology, rank-1 hit]\n" << format_hit_table({a.topHit}) << "\n";

  out << "[alignment]\n";
  out << "  score " << r.alignment.score << ", identity " << fixed(r.alignment.identityPercent, 1)
      << "%, " << r.alignment.length << " columns\n\n";

  out << "[mutations]\n";
  if (r.mutations.empty()) out << "  none\n";
  for (std::size_t i = 0; i < r.mutations.size(); ++i) {
    const Mutation& m = r.mutations[i];
    const auto shorten = [](const std::string& s) {
      if (s.empty()) return std::string("-");
      return s.size() > 12 ? s.substr(0, 12) + "...(" + std::to_string(s.size()) + ")" : s;
    };
    out << "  " << (i + 1) << ". pos " << m.position << " " << to_string(m.kind) << " "
        << shorten(m.refBases) << ">" << shorten(m.altBases) << " " << effect_text(m) << "\n";
  }
  out << "\n[classification]\n";
  if (r.classifications.empty()) out << "  no malignant candidates\n";
  for (const CandidateResult& c : r.classifications) {
    const Mutation& m = r.mutations.at(c.mutationIndex);
    out << "  mutation " << (c.mutationIndex + 1) << " (pos " << m.position << ", "
        << effect_text(m) << "): score " << fixed(c.classification.score, 6) << " -> "
        << to_string(c.classification.label) << "\n";
  }
  out << "\n";
  for (const std::string& note : r.notes) out << "note: " << note << "\n";
  out << "model: " << r.config.modelSource << "\n\n";
  out << "result: " << r.displayText << "\n";
  return out.str();
}

}  // namespace mutascan
