#include "lexplain/synth.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <set>

#include "lexplain/error.h"
#include "lexplain/rng.h"

namespace lexplain::synth {

namespace {

struct BaseClass {
  SubstantiveOrder order;
  std::array<const char*, 3> categories;
  std::vector<std::string> keywords;
};

const std::vector<BaseClass>& base_classes() {
  static const std::vector<BaseClass> kClasses = {
      {SubstantiveOrder::kSocial,
       {"derecho del trabajo", "derecho de la contratacion laboral",
        "derecho relativo al contrato de trabajo"},
       {"despido", "salario", "trabajador", "convenio", "nómina", "indemnización",
        "antigüedad", "jornada", "vacaciones", "incapacidad", "prestación", "cotización",
        "desempleo", "sindicato", "huelga", "finiquito", "plantilla", "excedencia",
        "readmisión", "improcedente", "temporalidad", "estatuto", "laboral", "empleador",
        "mutua", "invalidez"}},
      {SubstantiveOrder::kPenal,
       {"delitos contra la seguridad colectiva", "derecho de daños",
        "derecho de la circulacion vial"},
       {"delito", "acusado", "pena", "prisión", "lesión", "robo", "hurto", "alcoholemia",
        "conducción", "vehículo", "atestado", "agente", "testigo", "condena", "multa",
        "reincidencia", "agravante", "atenuante", "dolo", "víctima", "fiscal", "tráfico",
        "estupefaciente", "detención", "denuncia", "calzada"}},
      {SubstantiveOrder::kCivil,
       {"derechos reales", "derecho de garantias reales", "derecho hipotecario"},
       {"hipoteca", "propiedad", "finca", "inmueble", "registro", "usufructo",
        "servidumbre", "dominio", "arrendamiento", "arrendatario", "arrendador", "posesión",
        "escritura", "notario", "herencia", "heredero", "testamento", "linde", "colindante",
        "comunidad", "propietario", "vivienda", "desahucio", "renta", "fianza", "inscripción"}},
      {SubstantiveOrder::kAdministrative,
       {"derecho urbanistico", "derecho de la edificacion", "licencias urbanisticas"},
       {"licencia", "urbanismo", "edificación", "ayuntamiento", "obra", "planeamiento",
        "municipal", "expropiación", "justiprecio", "concesión", "subvención", "funcionario",
        "oposición", "plaza", "pública", "reglamento", "ordenanza", "parcela",
        "recalificación", "infracción", "suelo", "catastro", "permiso", "demolición",
        "urbanizable", "consistorio"}},
      {SubstantiveOrder::kMercantile,
       {"derecho de obligaciones y contratos", "derecho bancario y del mercado financiero",
        "derecho bancario"},
       {"préstamo", "cláusula", "interés", "banco", "financiera", "abusiva", "consumidor",
        "nulidad", "comisión", "tarjeta", "crédito", "deuda", "acreedor", "deudor", "aval",
        "pagaré", "factura", "mercantil", "comerciante", "swap", "usura", "transparencia",
        "amortización", "vencimiento", "cuota", "euríbor"}},
      {SubstantiveOrder::kTributary,
       {"derecho tributario", "impuesto sobre la renta", "procedimiento de inspeccion"},
       {"impuesto", "tributo", "hacienda", "liquidación", "inspección", "iva", "recargo",
        "deducción", "contribuyente", "tributaria", "devengo", "imponible", "exención",
        "retención", "patrimonio", "donación", "plusvalía", "aduana", "tasación",
        "autoliquidación", "bonificación", "gravamen", "irpf", "rendimiento", "fiscalidad",
        "declarante"}},
      {SubstantiveOrder::kCivilMercantile,
       {"derecho concursal", "derecho societario", "responsabilidad de administradores"},
       {"concurso", "administrador", "sociedad", "socio", "junta", "accionista", "capital",
        "acta", "estatutario", "quiebra", "insolvencia", "masa", "liquidador", "concursal",
        "calificación", "culpable", "fusión", "escisión", "dividendo", "participación",
        "consejo", "balance", "auditoría", "disolución", "patente", "marca"}},
  };
  return kClasses;
}

const std::vector<std::string> kNoise = {
    "parte",       "documento",    "prueba",      "hecho",      "motivo",
    "alegación",   "juzgador",     "instancia",   "término",    "plazo",
    "escrito",     "recurrente",   "recurrida",   "diligencia", "notificación",
    "providencia", "expediente",   "informe",     "pericial",   "documental",
    "valoración",  "criterio",     "doctrina",    "jurisprudencia", "artículo",
    "apartado",    "norma",        "precepto",    "interpretación", "costas",
    "cuestión",    "pretensión",   "petición",    "demanda",    "contestación",
    "vista",       "acto",         "razonamiento", "requisito", "actuación",
    "declaración", "resolución",   "fecha",       "efecto",     "relación",
    "sentido",     "supuesto",     "caso",        "análisis",   "conclusión"};

struct Venue {
  const char* court;
  const char* division;
  const char* case_type;
  char gin_digit;
  std::array<const char*, 2> decisions;
};

// Court profile by substantive order.
Venue venue_for(SubstantiveOrder order) {
  switch (order) {
    case SubstantiveOrder::kSocial:
      return {"TRIBUNAL SUPERIOR DE JUSTICIA", "Sala de lo Social", "Recurso de Suplicación",
              '4', {"Que debemos desestimar y desestimamos el recurso",
                    "Que debemos estimar y estimamos el recurso"}};
    case SubstantiveOrder::kPenal:
      return {"AUDIENCIA PROVINCIAL", "Sección Segunda", "Procedimiento Abreviado", '2',
              {"Que debemos condenar y condenamos al acusado",
               "Que debemos absolver y absolvemos al acusado"}};
    case SubstantiveOrder::kCivil:
      return {"AUDIENCIA PROVINCIAL", "Sección Cuarta", "Recurso de Apelación", '1',
              {"Que desestimamos el recurso de apelación",
               "Que estimamos el recurso de apelación"}};
    case SubstantiveOrder::kAdministrative:
    case SubstantiveOrder::kTributary:
      return {"TRIBUNAL SUPERIOR DE JUSTICIA", "Sala de lo Contencioso-Administrativo",
              "Recurso Contencioso-Administrativo", '3',
              {"Que desestimamos el recurso", "Que estimamos parcialmente el recurso"}};
    case SubstantiveOrder::kMercantile:
    case SubstantiveOrder::kCivilMercantile:
      return {"JUZGADO DE LO MERCANTIL", "Juzgado de lo Mercantil", "Juicio Ordinario", '1',
              {"Que debo desestimar y desestimo la demanda",
               "Que debo estimar y estimo la demanda"}};
  }
  return {"", "", "", '0', {"", ""}};
}

const std::vector<const char*> kCities = {"MADRID", "BARCELONA", "VALENCIA", "SEVILLA",
                                          "ZARAGOZA", "MÁLAGA", "MURCIA", "BILBAO"};
const std::vector<const char*> kMonths = {"enero",  "febrero", "marzo",      "abril",
                                          "mayo",   "junio",   "julio",      "agosto",
                                          "septiembre", "octubre", "noviembre", "diciembre"};
const std::vector<const char*> kFirst = {"Antonio", "José", "Manuel", "Francisco", "Juan",
                                         "Carlos", "Miguel", "Pedro", "Luis", "Javier"};
const std::vector<const char*> kFemale = {"María", "Carmen", "Ana", "Isabel", "Laura",
                                          "Cristina", "Marta", "Lucía", "Elena", "Teresa"};
const std::vector<const char*> kSurnames = {"García", "Rodríguez", "González", "Fernández",
                                            "López",  "Martínez",  "Sánchez",  "Pérez",
                                            "Gómez",  "Martín",    "Jiménez",  "Ruiz",
                                            "Moreno", "Navarro",   "Torres",   "Romero"};
const std::vector<const char*> kCompanies = {"Construcciones Levante", "Transportes Norte",
                                             "Inversiones Atlántico", "Servicios Integrales Sur",
                                             "Distribuciones Centro"};

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[rng.uniform_index(v.size())];
}

std::string full_name(Rng& rng, bool female) {
  return std::string(female ? pick(rng, kFemale) : pick(rng, kFirst)) + " " +
         pick(rng, kSurnames) + " " + pick(rng, kSurnames);
}

std::string digits(Rng& rng, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += static_cast<char>('0' + rng.uniform_index(10));
  return out;
}

std::string letter_spaced(std::string_view word) {
  std::string out;
  for (char c : word) {
    if (!out.empty()) out += ' ';
    out += c;
  }
  return out;
}

// Samples body sentences. A noise token is drawn uniformly from the shared
// pool together with the vocabularies of every class outside the label set;
// other tokens come from a uniformly chosen class of the set.
std::string body(Rng& rng, const std::vector<int>& classes, int n_tokens, double noise) {
  std::vector<const std::string*> pool;
  for (const auto& w : kNoise) pool.push_back(&w);
  for (std::size_t c = 0; c < base_classes().size(); ++c) {
    if (std::find(classes.begin(), classes.end(), static_cast<int>(c)) != classes.end()) continue;
    for (const auto& w : base_classes()[c].keywords) pool.push_back(&w);
  }
  std::string out;
  int in_sentence = 0;
  const int sentence_len = 12;
  for (int t = 0; t < n_tokens; ++t) {
    const std::string& word =
        rng.bernoulli(noise)
            ? *pick(rng, pool)
            : pick(rng, base_classes()[classes[rng.uniform_index(classes.size())]].keywords);
    if (in_sentence == 0) {
      std::string cap = word;
      if (!cap.empty() && cap[0] >= 'a' && cap[0] <= 'z') cap[0] = static_cast<char>(cap[0] - 32);
      out += cap;
    } else {
      out += " " + word;
    }
    if (++in_sentence == sentence_len || t + 1 == n_tokens) {
      out += ".\n";
      in_sentence = 0;
    }
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> default_combos(std::size_t n_classes) {
  std::vector<std::vector<int>> out;
  for (std::size_t c = 0; c < n_classes; ++c) out.push_back({static_cast<int>(c)});
  if (n_classes >= 2) out.push_back({0, 1});
  if (n_classes >= 4) out.push_back({2, 3});
  if (n_classes >= 5) out.push_back({0, 2, 4});
  return out;
}

LabelAssignment base_class(std::size_t index) {
  const auto& b = base_classes().at(index);
  LabelAssignment a;
  a.order = b.order;
  for (std::size_t i = 0; i < 3; ++i) a.categories[i] = b.categories[i];
  return a;
}

const std::vector<std::string>& class_keywords(std::size_t index) {
  return base_classes().at(index).keywords;
}

const std::vector<std::string>& noise_words() { return kNoise; }

Corpus generate_corpus(const SynthConfig& config) {
  if (config.n_classes == 0 || config.n_classes > kBaseClassCount) {
    throw ConfigError("synthetic class count must lie in [1, " +
                      std::to_string(kBaseClassCount) + "]");
  }
  if (config.min_tokens < 1 || config.max_tokens < config.min_tokens) {
    throw ConfigError("synthetic token range is invalid");
  }
  if (!(config.noise >= 0.0 && config.noise <= 1.0)) {
    throw ConfigError("synthetic noise must lie in [0, 1]");
  }
  const auto combos =
      config.combos.empty() ? default_combos(config.n_classes) : config.combos;
  std::array<std::vector<std::size_t>, 3> by_size;
  std::set<std::set<int>> distinct;
  for (std::size_t i = 0; i < combos.size(); ++i) {
    const std::set<int> members(combos[i].begin(), combos[i].end());
    if (members.empty() || members.size() > 3 || members.size() != combos[i].size()) {
      throw ConfigError("synthetic combination " + std::to_string(i) +
                        " must hold 1 to 3 distinct classes");
    }
    for (int c : members) {
      if (c < 0 || static_cast<std::size_t>(c) >= config.n_classes) {
        throw ConfigError("synthetic combination " + std::to_string(i) +
                          " names an unknown class");
      }
    }
    if (!distinct.insert(members).second) {
      throw ConfigError("synthetic combination " + std::to_string(i) + " is repeated");
    }
    by_size[members.size() - 1].push_back(i);
  }
  std::array<double, 3> weights{};
  double total = 0.0;
  for (std::size_t s = 0; s < 3; ++s) {
    if (config.size_weights[s] < 0.0) throw ConfigError("label-set size weights must be >= 0");
    weights[s] = by_size[s].empty() ? 0.0 : config.size_weights[s];
    total += weights[s];
  }
  if (total <= 0.0) throw ConfigError("label-set size weights select no combination");

  Rng rng(config.seed);
  Corpus corpus;
  for (std::size_t d = 0; d < config.n_docs; ++d) {
    double u = rng.uniform01() * total;
    std::size_t size = 0;
    for (std::size_t s = 0; s < 3; ++s) {
      if (weights[s] == 0.0) continue;
      size = s;
      if (u < weights[s]) break;
      u -= weights[s];
    }
    const auto& combo = combos[pick(rng, by_size[size])];

    const Venue venue = venue_for(base_classes()[combo.front()].order);
    const std::string city = pick(rng, kCities);
    const std::string year = std::to_string(2010 + rng.uniform_index(12));
    const std::string gin =
        digits(rng, 5) + digits(rng, 2) + venue.gin_digit + year + digits(rng, 7);
    char number[16];
    std::snprintf(number, sizeof number, "%llu",
                  static_cast<unsigned long long>(1 + rng.uniform_index(2000)));
    const bool spaced = rng.bernoulli(config.spaced_heading);

    std::string text;
    text += std::string(venue.court) + " DE " + city + "\n";
    text += std::string(venue.division) + "\n";
    text += "NIG: " + gin.substr(0, 5) + " " + gin.substr(5, 2) + " " + gin.substr(7, 1) + " " +
            gin.substr(8, 4) + " " + gin.substr(12) + "\n";
    text += std::string(venue.case_type) + " nº " + number + "/" + year + "\n\n";
    text += (spaced ? letter_spaced("SENTENCIA") : std::string("SENTENCIA")) + " " +
            std::to_string(1 + rng.uniform_index(900)) + "/" + year + "\n\n";
    text += "En " + city + ", a " + std::to_string(1 + rng.uniform_index(28)) + " de " +
            pick(rng, kMonths) + " de " + year + ".\n\n";
    text += "Vistos por el Magistrado Ilmo. Sr. D. " + full_name(rng, false) +
            " los presentes autos promovidos por " + pick(rng, kCompanies) +
            ", S.L., representada por el Procurador D. " + full_name(rng, false) +
            " y asistida por el Letrado D. " + full_name(rng, false) + ", frente a Dña. " +
            full_name(rng, true) + ".\n\n";

    const int n_tokens =
        config.min_tokens +
        static_cast<int>(rng.uniform_index(config.max_tokens - config.min_tokens + 1));
    const int first = n_tokens / 2;
    text += "ANTECEDENTES DE HECHO\n\n";
    text += "PRIMERO.- " + body(rng, combo, first, config.noise) + "\n";
    text += "FUNDAMENTOS DE DERECHO\n\n";
    text += "PRIMERO.- " + body(rng, combo, n_tokens - first, config.noise) + "\n";
    text += "FALLAMOS\n\n";
    text += std::string(pick(rng, std::vector<const char*>(venue.decisions.begin(),
                                                            venue.decisions.end()))) +
            ", sin expresa imposición de costas.\n";

    Judgement doc;
    char id[32];
    std::snprintf(id, sizeof id, "doc-%05zu", d + 1);
    doc.id = id;
    doc.raw_text = std::move(text);
    doc.gin = gin;
    for (int c : combo) doc.annotations.push_back(base_class(static_cast<std::size_t>(c)));
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace lexplain::synth
