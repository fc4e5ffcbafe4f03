// First 32 points (origin skipped) of the 10-dimensional sequence, times 64.
const FIRST_32_D10: [[u32; 10]; 32] = [
    [32, 32, 32, 32, 32, 32, 32, 32, 32, 32],
    [48, 16, 16, 16, 48, 48, 16, 48, 48, 48],
    [16, 48, 48, 48, 16, 16, 48, 16, 16, 16],
    [24, 24, 40, 56, 24, 8, 24, 56, 56, 40],
    [56, 56, 8, 24, 56, 40, 56, 24, 24, 8],
    [40, 8, 56, 40, 40, 56, 8, 8, 8, 24],
    [8, 40, 24, 8, 8, 24, 40, 40, 40, 56],
    [12, 20, 60, 28, 36, 20, 28, 60, 60, 20],
    [44, 52, 28, 60, 4, 52, 60, 28, 28, 52],
    [60, 4, 44, 12, 20, 36, 12, 12, 12, 36],
    [28, 36, 12, 44, 52, 4, 44, 44, 44, 4],
    [20, 12, 20, 36, 60, 28, 4, 4, 4, 60],
    [52, 44, 52, 4, 28, 60, 36, 36, 36, 28],
    [36, 28, 4, 52, 12, 44, 20, 52, 52, 12],
    [4, 60, 36, 20, 44, 12, 52, 20, 20, 44],
    [6, 30, 30, 42, 18, 62, 34, 54, 30, 10],
    [38, 62, 62, 10, 50, 30, 2, 22, 62, 42],
    [54, 14, 14, 58, 34, 14, 50, 6, 46, 58],
    [22, 46, 46, 26, 2, 46, 18, 38, 14, 26],
    [30, 6, 54, 18, 10, 54, 58, 14, 38, 34],
    [62, 38, 22, 50, 42, 22, 26, 46, 6, 2],
    [46, 22, 38, 2, 58, 6, 42, 62, 22, 18],
    [14, 54, 6, 34, 26, 38, 10, 30, 54, 50],
    [10, 10, 34, 54, 54, 42, 62, 10, 34, 30],
    [42, 42, 2, 22, 22, 10, 30, 42, 2, 62],
    [58, 26, 50, 38, 6, 26, 46, 58, 18, 46],
    [26, 58, 18, 6, 38, 58, 14, 26, 50, 14],
    [18, 18, 10, 14, 46, 34, 38, 50, 26, 54],
    [50, 50, 42, 46, 14, 2, 6, 18, 58, 22],
    [34, 2, 26, 30, 30, 18, 54, 2, 42, 6],
    [2, 34, 58, 62, 62, 50, 22, 34, 10, 38],
    [3, 17, 45, 35, 9, 59, 51, 43, 63, 3],
];
// times 4096
const ROW_1024_D256: [u32; 256] = [
    6, 1542, 1834, 1994, 2282, 3458, 990, 2406, 2854, 2750, 3366, 3774, 2894, 1386, 542, 3510,
    3502, 810, 2206, 1418, 2150, 502, 3382, 2062, 3302, 794, 3114, 3438, 1290, 178, 4074, 3958,
    1550, 3250, 806, 2746, 3474, 1838, 950, 510, 1718, 338, 3274, 3654, 1670, 426, 646, 78,
    4054, 314, 2070, 3114, 718, 3778, 1346, 1830, 2722, 2150, 534, 1558, 210, 3510, 2838, 3958,
    1470, 942, 3918, 1934, 3882, 3054, 3946, 142, 3566, 1470, 334, 526, 1222, 3014, 1990, 2338,
    2978, 2658, 1238, 3190, 4050, 626, 1906, 790, 54, 3802, 2462, 1562, 3662, 2046, 3194, 766,
    2874, 926, 1870, 1466, 2766, 46, 3102, 3742, 2846, 4070, 4022, 1766, 1366, 2358, 1134, 2414,
    2878, 134, 942, 3822, 438, 1494, 1726, 3966, 2174, 3958, 382, 3894, 590, 3254, 830, 2926,
    1566, 1038, 642, 2690, 962, 1346, 2210, 1250, 3362, 1506, 1378, 178, 3058, 754, 2034, 882,
    594, 842, 2154, 346, 2554, 2106, 330, 3994, 3610, 1626, 2138, 954, 1722, 1882, 2346, 618,
    1882, 678, 1538, 1694, 902, 1906, 3706, 1462, 2554, 82, 3982, 3430, 562, 350, 3034, 3994,
    534, 458, 3866, 2790, 238, 1834, 1418, 814, 1990, 398, 2794, 294, 1902, 3458, 898, 362,
    1638, 3122, 2726, 2050, 2538, 3474, 3914, 886, 1954, 3782, 626, 1886, 458, 2206, 2854, 1258,
    1390, 2738, 3642, 2702, 3678, 2546, 98, 3222, 3910, 1162, 1614, 2426, 474, 2414, 994, 1294,
    2762, 2582, 666, 2170, 722, 486, 1070, 158, 2578, 782, 1710, 2862, 1354, 490, 142, 2434,
    266, 1386, 1174, 2378, 1286, 870, 3362, 2882, 2334, 686, 1070, 1150, 394, 3346, 2602, 2770,
];
// times 256
const ROW_77_D256: [u32; 256] = [
    214, 214, 2, 198, 214, 130, 58, 166, 46, 110, 34, 202, 126, 86, 254, 18,
    210, 226, 202, 2, 38, 226, 222, 202, 218, 174, 206, 94, 42, 118, 250, 190,
    46, 14, 178, 198, 142, 230, 34, 70, 210, 190, 142, 122, 62, 198, 202, 130,
    110, 46, 62, 26, 86, 10, 46, 34, 18, 74, 198, 214, 218, 18, 66, 226,
    94, 30, 6, 142, 250, 62, 30, 74, 134, 78, 190, 50, 254, 66, 86, 142,
    106, 142, 14, 114, 158, 86, 154, 122, 98, 198, 38, 54, 210, 18, 14, 22,
    158, 210, 218, 222, 230, 238, 114, 130, 162, 182, 242, 18, 202, 182, 162, 34,
    66, 186, 122, 230, 238, 50, 86, 198, 50, 50, 118, 18, 230, 182, 206, 106,
    134, 166, 226, 78, 246, 234, 222, 10, 246, 166, 254, 26, 142, 214, 178, 18,
    138, 22, 114, 14, 122, 218, 202, 238, 34, 42, 222, 178, 62, 10, 58, 234,
    162, 150, 2, 174, 102, 34, 134, 98, 102, 6, 242, 118, 206, 174, 118, 98,
    154, 90, 210, 206, 206, 114, 158, 86, 226, 238, 2, 250, 162, 10, 142, 250,
    142, 54, 98, 6, 38, 14, 118, 62, 30, 134, 206, 106, 174, 126, 26, 126,
    246, 14, 14, 254, 30, 98, 122, 50, 66, 138, 178, 86, 102, 198, 126, 230,
    190, 90, 222, 142, 50, 26, 206, 10, 146, 38, 206, 74, 62, 126, 10, 130,
    214, 230, 30, 214, 162, 246, 202, 174, 126, 222, 214, 46, 22, 114, 178, 246,
];
