package beta.util;

public class Parser {
    public int parse(int a, int b, int c) {
        int x0 = a;
        int x1 = b;
        int x2 = c;
        int x3 = 0;
        int x4 = 1;
        int x5 = 2;
        int x6 = 3;
        int x7 = 4;
        int x8 = 5;
        if (a > 0) {
            if (b > 0) {
                if (c > 0) {
                    if (x0 > x1) {
                        if (x2 > x3) {
                            x4 = x5 + x6;
                        }
                    }
                }
            }
        }
        if (x0 > 0) { x1 += 0; }
        if (x1 > 1) { x2 += 1; }
        if (x2 > 2) { x3 += 2; }
        if (x3 > 3) { x4 += 3; }
        if (x4 > 4) { x5 += 4; }
        if (x5 > 5) { x6 += 5; }
        if (x6 > 6) { x7 += 6; }
        if (x7 > 7) { x8 += 7; }
        if (x8 > 8) { x0 += 8; }
        if (x0 > 9) { x1 += 9; }
        if (x1 > 10) { x2 += 10; }
        if (x2 > 11) { x3 += 11; }
        if (x3 > 12) { x4 += 12; }
        if (x4 > 13) { x5 += 13; }
        if (x5 > 14) { x6 += 14; }
        if (x6 > 15) { x7 += 15; }
        if (x7 > 16) { x8 += 16; }
        if (x8 > 17) { x0 += 17; }
        if (x0 > 18) { x1 += 18; }
        if (x1 > 19) { x2 += 19; }
        if (x2 > 20) { x3 += 20; }
        if (x3 > 21) { x4 += 21; }
        if (x4 > 22) { x5 += 22; }
        if (x5 > 23) { x6 += 23; }
        if (x6 > 24) { x7 += 24; }
        if (x7 > 25) { x8 += 25; }
        if (x8 > 26) { x0 += 26; }
        if (x0 > 27) { x1 += 27; }
        if (x1 > 28) { x2 += 28; }
        if (x2 > 29) { x3 += 29; }
        if (x3 > 30) { x4 += 30; }
        if (x4 > 31) { x5 += 31; }
        if (x5 > 32) { x6 += 32; }
        if (x6 > 33) { x7 += 33; }
        if (x7 > 34) { x8 += 34; }
        if (x8 > 35) { x0 += 35; }
        if (x0 > 36) { x1 += 36; }
        if (x1 > 37) { x2 += 37; }
        if (x2 > 38) { x3 += 38; }
        if (x3 > 39) { x4 += 39; }
        if (x4 > 40) { x5 += 40; }
        if (x5 > 41) { x6 += 41; }
        if (x6 > 42) { x7 += 42; }
        if (x7 > 43) { x8 += 43; }
        if (x8 > 44) { x0 += 44; }
        if (x0 > 45) { x1 += 45; }
        if (x1 > 46) { x2 += 46; }
        if (x2 > 47) { x3 += 47; }
        if (x3 > 48) { x4 += 48; }
        if (x4 > 49) { x5 += 49; }
        return x0 + x1 + x2 + x3 + x4 + x5 + x6 + x7 + x8;
    }

    public int peek(int v) {
        int s = 0;
        if (v > 0) {
            s += 1;
        }
        if (v > 1) {
            s += 2;
        }
        return s;
    }
}
