#include "drsim/community.hpp"

namespace drsim {

// Synthetic normalized daily load-curve shape for a summer residential
// community: overnight trough around 03:30, a small morning shoulder near
// 08:00 and a broad late-afternoon peak near 17:45. One value per 5-minute
// slot, normalized to sum to 1. Scenarios may replace it with a custom
// 288-row CSV (see community.load_curve_csv).
const std::vector<double>& bundled_load_curve() {
    static const std::vector<double> curve = {
    0.00241801, 0.00239823, 0.00237900, 0.00236025, 0.00234191, 0.00232394,
    0.00230627, 0.00228886, 0.00227166, 0.00225464, 0.00223776, 0.00222101,
    0.00220437, 0.00218782, 0.00217135, 0.00215498, 0.00213870, 0.00212253,
    0.00210649, 0.00209061, 0.00207491, 0.00205942, 0.00204420, 0.00202929,
    0.00201472, 0.00200056, 0.00198685, 0.00197366, 0.00196103, 0.00194903,
    0.00193772, 0.00192714, 0.00191737, 0.00190844, 0.00190042, 0.00189335,
    0.00188728, 0.00188226, 0.00187832, 0.00187550, 0.00187382, 0.00187333,
    0.00187404, 0.00187596, 0.00187912, 0.00188353, 0.00188919, 0.00189611,
    0.00190429, 0.00191373, 0.00192443, 0.00193638, 0.00194958, 0.00196402,
    0.00197969, 0.00199658, 0.00201469, 0.00203400, 0.00205451, 0.00207619,
    0.00209905, 0.00212306, 0.00214821, 0.00217447, 0.00220182, 0.00223023,
    0.00225966, 0.00229007, 0.00232141, 0.00235362, 0.00238663, 0.00242036,
    0.00245471, 0.00248958, 0.00252485, 0.00256039, 0.00259606, 0.00263171,
    0.00266716, 0.00270225, 0.00273679, 0.00277060, 0.00280346, 0.00283519,
    0.00286559, 0.00289446, 0.00292161, 0.00294685, 0.00297001, 0.00299092,
    0.00300946, 0.00302548, 0.00303888, 0.00304958, 0.00305752, 0.00306267,
    0.00306502, 0.00306459, 0.00306143, 0.00305560, 0.00304721, 0.00303637,
    0.00302323, 0.00300795, 0.00299072, 0.00297173, 0.00295118, 0.00292930,
    0.00290630, 0.00288242, 0.00285788, 0.00283291, 0.00280772, 0.00278253,
    0.00275754, 0.00273294, 0.00270892, 0.00268564, 0.00266325, 0.00264189,
    0.00262167, 0.00260270, 0.00258507, 0.00256887, 0.00255414, 0.00254094,
    0.00252931, 0.00251928, 0.00251087, 0.00250409, 0.00249894, 0.00249544,
    0.00249357, 0.00249334, 0.00249474, 0.00249777, 0.00250243, 0.00250871,
    0.00251663, 0.00252617, 0.00253736, 0.00255020, 0.00256472, 0.00258093,
    0.00259885, 0.00261852, 0.00263998, 0.00266324, 0.00268836, 0.00271538,
    0.00274433, 0.00277527, 0.00280824, 0.00284328, 0.00288044, 0.00291977,
    0.00296130, 0.00300507, 0.00305113, 0.00309950, 0.00315021, 0.00320329,
    0.00325874, 0.00331659, 0.00337682, 0.00343945, 0.00350444, 0.00357178,
    0.00364144, 0.00371336, 0.00378751, 0.00386380, 0.00394218, 0.00402254,
    0.00410479, 0.00418883, 0.00427452, 0.00436173, 0.00445033, 0.00454014,
    0.00463100, 0.00472274, 0.00481516, 0.00490806, 0.00500124, 0.00509447,
    0.00518753, 0.00528018, 0.00537219, 0.00546332, 0.00555331, 0.00564191,
    0.00572887, 0.00581393, 0.00589684, 0.00597735, 0.00605520, 0.00613016,
    0.00620197, 0.00627041, 0.00633525, 0.00639628, 0.00645329, 0.00650608,
    0.00655447, 0.00659830, 0.00663742, 0.00667167, 0.00670095, 0.00672515,
    0.00674419, 0.00675798, 0.00676650, 0.00676969, 0.00676756, 0.00676011,
    0.00674737, 0.00672938, 0.00670620, 0.00667793, 0.00664466, 0.00660651,
    0.00656361, 0.00651611, 0.00646419, 0.00640801, 0.00634777, 0.00628367,
    0.00621593, 0.00614477, 0.00607042, 0.00599313, 0.00591313, 0.00583068,
    0.00574602, 0.00565942, 0.00557112, 0.00548138, 0.00539046, 0.00529859,
    0.00520603, 0.00511302, 0.00501979, 0.00492657, 0.00483357, 0.00474101,
    0.00464908, 0.00455799, 0.00446790, 0.00437899, 0.00429142, 0.00420533,
    0.00412085, 0.00403812, 0.00395724, 0.00387830, 0.00380139, 0.00372660,
    0.00365397, 0.00358356, 0.00351541, 0.00344955, 0.00338600, 0.00332475,
    0.00326582, 0.00320918, 0.00315483, 0.00310272, 0.00305282, 0.00300509,
    0.00295949, 0.00291594, 0.00287440, 0.00283478, 0.00279703, 0.00276107,
    0.00272681, 0.00269418, 0.00266309, 0.00263346, 0.00260519, 0.00257821,
    0.00255243, 0.00252775, 0.00250409, 0.00248137, 0.00245951, 0.00243841,
    };
    return curve;
}

}  // namespace drsim
