package example;

public class StepHolder {

    private AbstractStep current;

    public AbstractStep getStep() {
        return current;
    }

    public boolean isFailOnCCE() {
        return getStep().isFailOnCCE();
    }
}
