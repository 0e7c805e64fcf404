package beta.core;

import beta.model.Record;

public class Ledger {
    private int counter;

    public int step0(Record r, int v) {
        int s = r.getA();
        if (v > 0) {
            s++;
        }
        if (v > 1) {
            s++;
        }
        if (v > 2) {
            s++;
        }
        if (v > 3) {
            s++;
        }
        counter += s;
        return s;
    }

    public int step1(Record r, int v) {
        int s = r.getB();
        if (v > 0) {
            s++;
        }
        if (v > 1) {
            s++;
        }
        if (v > 2) {
            s++;
        }
        if (v > 3) {
            s++;
        }
        counter += s;
        return s;
    }

    public int step2(Record r, int v) {
        int s = r.getC();
        if (v > 0) {
            s++;
        }
        if (v > 1) {
            s++;
        }
        if (v > 2) {
            s++;
        }
        if (v > 3) {
            s++;
        }
        counter += s;
        return s;
    }

    public int step3(Record r, int v) {
        int s = r.getD();
        if (v > 0) {
            s++;
        }
        if (v > 1) {
            s++;
        }
        if (v > 2) {
            s++;
        }
        if (v > 3) {
            s++;
        }
        counter += s;
        return s;
    }

    public int step4(Record r, int v) {
        int s = r.getE();
        if (v > 0) {
            s++;
        }
        if (v > 1) {
            s++;
        }
        if (v > 2) {
            s++;
        }
        if (v > 3) {
            s++;
        }
        counter += s;
        return s;
    }

    public int step5(Record r, int v) {
        int s = r.getF();
        if (v > 0) {
            s++;
        }
        if (v > 1) {
            s++;
        }
        if (v > 2) {
            s++;
        }
        if (v > 3) {
            s++;
        }
        counter += s;
        return s;
    }

    public int step6(Record r, int v) {
        int s = r.getG();
        if (v > 0) {
            s++;
        }
        if (v > 1) {
            s++;
        }
        if (v > 2) {
            s++;
        }
        if (v > 3) {
            s++;
        }
        counter += s;
        return s;
    }

    public int step7(Record r, int v) {
        int s = r.getH();
        if (v > 0) {
            s++;
        }
        if (v > 1) {
            s++;
        }
        if (v > 2) {
            s++;
        }
        if (v > 3) {
            s++;
        }
        counter += s;
        return s;
    }

    public int step8(Record r, int v) {
        int s = r.getA();
        if (v > 0) {
            s++;
        }
        if (v > 1) {
            s++;
        }
        if (v > 2) {
            s++;
        }
        if (v > 3) {
            s++;
        }
        counter += s;
        return s;
    }

    public int step9(Record r, int v) {
        int s = r.getB();
        if (v > 0) {
            s++;
        }
        if (v > 1) {
            s++;
        }
        if (v > 2) {
            s++;
        }
        if (v > 3) {
            s++;
        }
        counter += s;
        return s;
    }
}
