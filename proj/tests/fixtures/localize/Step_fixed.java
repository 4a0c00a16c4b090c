package example;

public class StepHolder {

    private AbstractStep current;

    public AbstractStep getStep() {
        return current;
    }

    public boolean isFailOnCCE() {
        AbstractStep step = getStep();
        if (step == null) {
            return false;
        }
        return step.isFailOnCCE();
    }
}
