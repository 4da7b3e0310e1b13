//! Published reference values used as fixtures by the acceptance suite.
#![allow(dead_code)]

/// (k, loglik, m, bic), n = 1699.
pub const BIC_ROWS: [(usize, f64, usize, f64); 7] = [
    (1, -37175.939, 89, 75013.842),
    (2, -32773.208, 179, 66877.781),
    (3, -31444.523, 269, 64889.813),
    (4, -30432.381, 359, 63534.930),
    (5, -29875.393, 449, 63090.356),
    (6, -29423.379, 539, 62855.730),
    (7, -29159.367, 629, 62997.107),
];
pub const BIC_N: usize = 1699;
pub const N_ITEMS: usize = 89;

/// LC indices: (j, code, d, mean, std, M_j, D_j).
pub const LC_INDEX: [(usize, &str, usize, f64, f64, f64, f64); 89] = [
    (1, "CC1", 1, 0.629, 0.107, 0.753, 0.760),
    (2, "CC2", 1, 0.577, 0.126, 0.807, 0.814),
    (3, "CC3", 1, 0.538, 0.177, 0.875, 0.883),
    (4, "CC4", 1, 0.404, 0.277, 0.991, 1.000),
    (5, "CC5", 1, 0.442, 0.226, 0.877, 0.885),
    (6, "CC6", 1, 0.398, 0.264, 0.921, 0.929),
    (7, "CC7", 1, 0.609, 0.142, 0.865, 0.873),
    (8, "CC8", 1, 0.542, 0.119, 0.827, 0.835),
    (9, "CC9", 1, 0.426, 0.159, 0.761, 0.768),
    (10, "CC10", 1, 0.410, 0.154, 0.711, 0.717),
    (11, "CC11", 1, 0.401, 0.126, 0.668, 0.674),
    (12, "CC12", 1, 0.316, 0.173, 0.533, 0.538),
    (13, "CC13", 1, 0.439, 0.086, 0.593, 0.598),
    (14, "CAS1", 2, 0.254, 0.205, 0.295, 0.348),
    (15, "CAS2", 2, 0.277, 0.296, 0.847, 1.000),
    (16, "CAS3", 2, 0.341, 0.202, 0.704, 0.831),
    (17, "CAS4", 2, 0.302, 0.282, 0.843, 0.995),
    (18, "CAS5", 2, 0.331, 0.152, 0.465, 0.549),
    (19, "HBD1", 3, 0.220, 0.212, 0.598, 0.882),
    (20, "HBD2", 3, 0.262, 0.195, 0.532, 0.785),
    (21, "HBD3", 3, 0.251, 0.194, 0.482, 0.711),
    (22, "HBD4", 3, 0.335, 0.150, 0.678, 1.000),
    (23, "HBD5", 3, 0.182, 0.235, 0.506, 0.746),
    (24, "HBD6", 3, 0.243, 0.187, 0.441, 0.650),
    (25, "HBD7", 3, 0.126, 0.287, 0.308, 0.454),
    (26, "HBD8", 3, 0.283, 0.161, 0.588, 0.867),
    (27, "HBD9", 3, 0.295, 0.150, 0.555, 0.819),
    (28, "HBD10", 3, 0.249, 0.185, 0.524, 0.773),
    (29, "HBD11", 3, 0.292, 0.143, 0.409, 0.603),
    (30, "HBD12", 3, 0.424, 0.088, 0.568, 0.838),
    (31, "HBD13", 3, 0.209, 0.203, 0.393, 0.580),
    (32, "HBD14", 3, 0.297, 0.150, 0.423, 0.624),
    (33, "HBD15", 3, 0.443, 0.070, 0.502, 0.740),
    (34, "HBD16", 3, 0.503, 0.057, 0.553, 0.816),
    (35, "HBD17", 3, 0.150, 0.273, 0.396, 0.584),
    (36, "HBD18", 3, 0.264, 0.170, 0.481, 0.709),
    (37, "HBD19", 3, 0.132, 0.293, 0.245, 0.361),
    (38, "HBD20", 3, 0.204, 0.223, 0.322, 0.475),
    (39, "HBD21", 3, 0.217, 0.197, 0.396, 0.584),
    (40, "ADL1", 4, 0.459, 0.243, 0.876, 1.000),
    (41, "ADL2", 4, 0.481, 0.264, 0.869, 0.992),
    (42, "ADL3", 4, 0.202, 0.289, 0.461, 0.526),
    (43, "ADL4", 4, 0.198, 0.290, 0.440, 0.502),
    (44, "ADL5", 4, 0.382, 0.241, 0.721, 0.823),
    (45, "ADL6", 4, 0.355, 0.214, 0.618, 0.705),
    (46, "ADL7", 4, 0.563, 0.215, 0.870, 0.993),
    (47, "ADL8", 4, 0.246, 0.291, 0.753, 0.860),
    (48, "ADL9", 4, 0.449, 0.224, 0.754, 0.861),
    (49, "ADL10", 4, 0.618, 0.207, 0.857, 0.978),
    (50, "ADL11", 4, 0.775, 0.030, 0.238, 0.272),
    (51, "ADL12", 4, 0.442, 0.214, 0.830, 0.947),
    (52, "ADL13", 4, 0.187, 0.279, 0.395, 0.451),
    (53, "ADL14", 4, 0.299, 0.189, 0.524, 0.598),
    (54, "ADL15", 4, 0.224, 0.262, 0.480, 0.548),
    (55, "ADL16", 4, 0.538, 0.092, 0.652, 0.744),
    (56, "ADL17", 4, 0.401, 0.159, 0.611, 0.697),
    (57, "ADL18", 4, 0.183, 0.285, 0.378, 0.432),
    (58, "I1", 5, 0.462, 0.245, 0.917, 1.000),
    (59, "I2", 5, 0.512, 0.194, 0.821, 0.895),
    (60, "I3", 5, 0.288, 0.135, 0.294, 0.321),
    (61, "I4", 5, 0.392, 0.093, 0.353, 0.385),
    (62, "I5", 5, 0.026, 0.440, 0.020, 0.022),
    (63, "I6", 5, 0.022, 0.450, 0.061, 0.067),
    (64, "I7", 5, 0.174, 0.261, 0.251, 0.274),
    (65, "I8", 5, 0.019, 0.445, 0.038, 0.041),
    (66, "I9", 5, 0.002, 0.474, 0.011, 0.012),
    (67, "I10", 5, 0.068, 0.401, 0.200, 0.218),
    (68, "I11", 5, 0.006, 0.465, 0.016, 0.017),
    (69, "I12", 5, 0.026, 0.444, 0.054, 0.059),
    (70, "I13", 5, 0.665, 0.068, 0.499, 0.544),
    (71, "I14", 5, 0.197, 0.245, 0.281, 0.306),
    (72, "I15", 5, 0.007, 0.464, 0.016, 0.017),
    (73, "N1", 6, 0.296, 0.140, 0.304, 0.910),
    (74, "N2", 6, 0.121, 0.352, 0.334, 1.000),
    (75, "N3", 6, 0.014, 0.459, 0.030, 0.090),
    (76, "N4", 6, 0.087, 0.347, 0.105, 0.314),
    (77, "N5", 6, 0.026, 0.445, 0.051, 0.153),
    (78, "N6", 6, 0.088, 0.335, 0.182, 0.545),
    (79, "N7", 6, 0.043, 0.412, 0.072, 0.216),
    (80, "N8", 6, 0.203, 0.220, 0.329, 0.985),
    (81, "D1", 7, 0.094, 0.370, 0.225, 0.674),
    (82, "D2", 7, 0.377, 0.081, 0.334, 1.000),
    (83, "D3", 7, 0.409, 0.072, 0.238, 0.713),
    (84, "D4", 7, 0.068, 0.383, 0.047, 0.141),
    (85, "D5", 7, 0.013, 0.449, 0.049, 0.147),
    (86, "D6", 7, 0.398, 0.073, 0.179, 0.536),
    (87, "SK1", 8, 0.088, 0.370, 0.220, 1.000),
    (88, "SK2", 8, 0.029, 0.441, 0.062, 0.282),
    (89, "SK3", 8, 0.126, 0.317, 0.203, 0.923),
];

/// 2PL estimates: (j, code, d, gamma, beta, D_star).
pub const TWOPL_ESTIMATES: [(usize, &str, usize, f64, f64, f64); 89] = [
    (1, "CC1", 1, 1.000, 0.000, 0.706),
    (2, "CC2", 1, 1.161, 0.492, 0.820),
    (3, "CC3", 1, 1.416, 0.875, 1.000),
    (4, "CC4", 1, 1.178, 1.742, 0.832),
    (5, "CC5", 1, 0.989, 1.347, 0.699),
    (6, "CC6", 1, 1.098, 1.666, 0.775),
    (7, "CC7", 1, 1.280, 0.283, 0.904),
    (8, "CC8", 1, 0.938, 1.134, 0.663),
    (9, "CC9", 1, 0.928, 2.093, 0.655),
    (10, "CC10", 1, 0.805, 2.154, 0.568),
    (11, "CC11", 1, 0.750, 2.501, 0.530),
    (12, "CC12", 1, 0.657, 3.113, 0.464),
    (13, "CC13", 1, 0.463, 2.355, 0.327),
    (14, "CAS1", 2, 1.000, 0.000, 0.177),
    (15, "CAS2", 2, 4.954, -0.806, 0.879),
    (16, "CAS3", 2, 3.673, -0.883, 0.652),
    (17, "CAS4", 2, 5.636, -0.829, 1.000),
    (18, "CAS5", 2, 1.702, -0.602, 0.302),
    (19, "HBD1", 3, 1.000, 0.000, 0.070),
    (20, "HBD2", 3, 5.773, -1.646, 0.403),
    (21, "HBD3", 3, 3.630, -1.453, 0.253),
    (22, "HBD4", 3, 2.722, -1.459, 0.190),
    (23, "HBD5", 3, 0.508, 2.305, 0.035),
    (24, "HBD6", 3, 2.959, -1.352, 0.206),
    (25, "HBD7", 3, 3.225, -1.110, 0.225),
    (26, "HBD8", 3, 1.111, -0.626, 0.078),
    (27, "HBD9", 3, 1.867, -1.208, 0.130),
    (28, "HBD10", 3, 3.443, -1.425, 0.240),
    (29, "HBD11", 3, 3.885, -1.586, 0.271),
    (30, "HBD12", 3, 3.285, -1.693, 0.229),
    (31, "HBD13", 3, 2.297, -1.144, 0.160),
    (32, "HBD14", 3, 12.159, -1.787, 0.848),
    (33, "HBD15", 3, 5.465, -1.813, 0.381),
    (34, "HBD16", 3, 6.356, -1.869, 0.443),
    (35, "HBD17", 3, 14.337, -1.729, 1.000),
    (36, "HBD18", 3, 3.580, -1.494, 0.250),
    (37, "HBD19", 3, 8.130, -1.606, 0.567),
    (38, "HBD20", 3, 9.393, -1.713, 0.655),
    (39, "HBD21", 3, 4.940, -1.568, 0.345),
    (40, "ADL1", 4, 1.000, 0.000, 0.819),
    (41, "ADL2", 4, 1.107, -0.142, 0.907),
    (42, "ADL3", 4, 0.681, 2.843, 0.558),
    (43, "ADL4", 4, 0.585, 3.123, 0.479),
    (44, "ADL5", 4, 1.018, 0.872, 0.834),
    (45, "ADL6", 4, 0.817, 1.082, 0.669),
    (46, "ADL7", 4, 0.975, -1.303, 0.799),
    (47, "ADL8", 4, 1.221, 1.758, 1.000),
    (48, "ADL9", 4, 0.732, -0.051, 0.600),
    (49, "ADL10", 4, 1.155, -2.084, 0.946),
    (50, "ADL11", 4, 0.212, -6.810, 0.174),
    (51, "ADL12", 4, 0.641, -0.132, 0.525),
    (52, "ADL13", 4, 0.386, 3.596, 0.316),
    (53, "ADL14", 4, 0.337, 2.049, 0.276),
    (54, "ADL15", 4, 0.429, 2.626, 0.352),
    (55, "ADL16", 4, 0.415, -1.089, 0.340),
    (56, "ADL17", 4, 0.461, 0.418, 0.378),
    (57, "ADL18", 4, 0.392, 3.674, 0.321),
    (58, "I1", 5, 1.000, 0.000, 0.050),
    (59, "I2", 5, 1.013, -0.349, 0.051),
    (60, "I3", 5, 0.086, 10.000, 0.004),
    (61, "I4", 5, 0.327, 1.181, 0.016),
    (62, "I5", 5, 0.355, 10.000, 0.018),
    (63, "I6", 5, 0.654, 6.530, 0.033),
    (64, "I7", 5, 0.160, 10.000, 0.008),
    (65, "I8", 5, 0.434, 10.000, 0.022),
    (66, "I9", 5, 20.000, 1.914, 1.000),
    (67, "I10", 5, 0.586, 4.627, 0.029),
    (68, "I11", 5, 0.541, 10.000, 0.027),
    (69, "I12", 5, 0.421, 8.777, 0.021),
    (70, "I13", 5, 0.605, -1.818, 0.030),
    (71, "I14", 5, 0.436, 3.367, 0.022),
    (72, "I15", 5, 0.545, 10.000, 0.027),
    (73, "N1", 6, 1.000, 0.000, 0.359),
    (74, "N2", 6, 2.784, -0.142, 1.000),
    (75, "N3", 6, 0.975, 3.359, 0.350),
    (76, "N4", 6, 1.267, 1.132, 0.455),
    (77, "N5", 6, 0.310, 10.000, 0.111),
    (78, "N6", 6, 0.233, 10.000, 0.084),
    (79, "N7", 6, 0.289, 10.000, 0.104),
    (80, "N8", 6, 1.350, 0.365, 0.485),
    (81, "D1", 7, 1.000, 0.000, 1.000),
    (82, "D2", 7, 0.050, 8.553, 0.050),
    (83, "D3", 7, 0.583, -2.037, 0.583),
    (84, "D4", 7, 0.201, 10.000, 0.201),
    (85, "D5", 7, 0.710, 4.550, 0.710),
    (86, "D6", 7, 0.050, 6.764, 0.050),
    (87, "SK1", 8, 1.000, 0.000, 1.000),
    (88, "SK2", 8, 0.328, 8.156, 0.328),
    (89, "SK3", 8, 0.519, 1.185, 0.519),
];

/// Items retained per dimension by D_j threshold: (t, counts, overall).
pub const LC_COUNTS: [(f64, [usize; 8], usize); 11] = [
    (0.0, [13, 5, 21, 17, 16, 8, 6, 3], 89),
    (0.1, [13, 5, 21, 18, 8, 7, 6, 3], 81),
    (0.2, [13, 5, 21, 18, 8, 6, 4, 3], 78),
    (0.3, [13, 5, 21, 17, 6, 5, 4, 2], 73),
    (0.4, [13, 4, 20, 17, 3, 4, 4, 2], 67),
    (0.5, [13, 4, 18, 15, 3, 4, 4, 2], 63),
    (0.6, [11, 3, 15, 11, 2, 3, 3, 2], 50),
    (0.7, [10, 3, 12, 10, 2, 3, 2, 2], 44),
    (0.8, [7, 3, 6, 8, 2, 3, 1, 2], 32),
    (0.9, [2, 2, 1, 5, 1, 3, 1, 2], 17),
    (1.0, [1, 1, 1, 1, 1, 1, 1, 1], 1),
];

/// Items retained per dimension by D* threshold: (t, counts, overall).
pub const TWOPL_COUNTS: [(f64, [usize; 8], usize); 11] = [
    (0.0, [13, 5, 21, 18, 15, 8, 6, 3], 89),
    (0.1, [13, 5, 18, 18, 1, 7, 4, 3], 69),
    (0.2, [13, 4, 15, 17, 1, 5, 4, 3], 62),
    (0.3, [13, 4, 8, 16, 1, 5, 3, 3], 53),
    (0.4, [12, 3, 6, 11, 1, 3, 3, 2], 41),
    (0.5, [11, 3, 4, 10, 1, 1, 3, 2], 35),
    (0.6, [9, 3, 3, 8, 1, 1, 2, 1], 28),
    (0.7, [6, 2, 2, 6, 1, 1, 2, 1], 21),
    (0.8, [4, 2, 2, 5, 1, 1, 1, 1], 17),
    (0.9, [2, 1, 1, 3, 1, 1, 1, 1], 11),
    (1.0, [1, 1, 1, 1, 1, 1, 1, 1], 8),
];

/// Clustering path: (h, s, LR, p-value), df = 4.
pub const CLUSTER_PATH: [(usize, usize, f64, f64); 7] = [
    (1, 7, 0.379, 0.984),
    (2, 6, 3.871, 0.424),
    (3, 5, 5.235, 0.264),
    (4, 4, 29.045, 0.000),
    (5, 3, 60.142, 0.000),
    (6, 2, 42.107, 0.000),
    (7, 1, 187.440, 0.000),
];

/// Merge order of the clustering path as pairs of original group labels.
pub const CLUSTER_MERGES: [(&[usize], &[usize]); 7] = [
    (&[4], &[5]),
    (&[3], &[8]),
    (&[6], &[7]),
    (&[4, 5], &[6, 7]),
    (&[1], &[2]),
    (&[3, 8], &[4, 5, 6, 7]),
    (&[1, 2], &[3, 4, 5, 6, 7, 8]),
];

/// Abilities per class (5 dimensions) and class weight.
pub const ABILITIES: [([f64; 5], f64); 6] = [
    ([-2.516, -2.690, -5.179, -5.137, -4.815], 0.213),
    ([1.142, -1.171, -3.402, -2.224, -3.927], 0.153),
    ([-1.253, -2.711, -2.227, -3.203, 1.050], 0.131),
    ([3.996, 0.702, -1.960, 0.525, -2.025], 0.102),
    ([2.068, -1.667, -1.946, -1.973, 1.333], 0.160),
    ([4.386, -0.451, -0.727, 2.117, 1.787], 0.238),
];

/// Lower triangle of the ability correlation matrix.
pub const CORRELATIONS: [[f64; 5]; 5] = [
    [1.000, 0.0, 0.0, 0.0, 0.0],
    [0.912, 1.000, 0.0, 0.0, 0.0],
    [0.866, 0.648, 1.000, 0.0, 0.0],
    [0.964, 0.863, 0.898, 1.000, 0.0],
    [0.611, 0.287, 0.905, 0.661, 1.000],
];
